//! Thermal, displaced-thermal and two-mode squeezed vacuum states.

use num_complex::Complex64;

use super::density::{auto_dim, DensityMatrix, Truncation};
use super::linalg::CMatrix;
use crate::error::{invalid, Error, Result};
use crate::numerics::log_factorials;

fn check_nbar(field: &'static str, nbar: f64) -> Result<()> {
    if nbar >= 0.0 && nbar.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite and >= 0, got {nbar}")))
    }
}

/// Bose-Einstein weights `nbar^n / (nbar+1)^(n+1)` for `n < dim`, and the
/// tail mass `(nbar/(nbar+1))^dim` beyond the cutoff.
pub(crate) fn bose_einstein(nbar: f64, dim: usize) -> (Vec<f64>, f64) {
    if nbar == 0.0 {
        let mut w = vec![0.0; dim];
        w[0] = 1.0;
        return (w, 0.0);
    }
    let ratio = nbar / (nbar + 1.0);
    let w = (0..dim).map(|n| ratio.powi(n as i32) / (nbar + 1.0)).collect();
    (w, ratio.powi(dim as i32))
}

fn check_deficit(trunc: &Truncation, deficit: f64, nbar: f64) -> Result<()> {
    if deficit > trunc.deficit_tol {
        return Err(Error::TruncationTooSmall {
            dim: trunc.dim,
            deficit,
            tol: trunc.deficit_tol,
            suggested: auto_dim(nbar, trunc.deficit_tol).max(trunc.dim + 1),
        });
    }
    Ok(())
}

/// Diagonal thermal state, not renormalized.
pub fn thermal_state(nbar: f64, trunc: impl Into<Truncation>) -> Result<DensityMatrix> {
    let trunc = trunc.into();
    trunc.check()?;
    check_nbar("nbar", nbar)?;
    let (w, tail) = bose_einstein(nbar, trunc.dim);
    check_deficit(&trunc, tail, nbar)?;
    Ok(DensityMatrix::diagonal_state(&w).with_deficit(tail))
}

/// `L_n^(a)(x)` for `n = 0..=n_max`.
fn laguerre_column(a: usize, x: f64, n_max: usize) -> Vec<f64> {
    let af = a as f64;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1.0);
    if n_max >= 1 {
        out.push(1.0 + af - x);
    }
    for k in 1..n_max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + af - x) * out[k] - (kf + af) * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

/// `<m|D(alpha)|k>` for `m < rows`, `k < cols`.
pub(crate) fn displacement_elements(alpha: Complex64, rows: usize, cols: usize) -> CMatrix {
    let r = alpha.norm();
    if r == 0.0 {
        return CMatrix::from_fn(rows, cols, |m, k| Complex64::new(if m == k { 1.0 } else { 0.0 }, 0.0));
    }
    let theta = alpha.arg();
    let x = r * r;
    let n = rows.max(cols);
    let lf = log_factorials(n);
    let lag: Vec<Vec<f64>> = (0..n).map(|a| laguerre_column(a, x, n)).collect();
    CMatrix::from_fn(rows, cols, |m, k| {
        let (lo, hi) = (m.min(k), m.max(k));
        let d = hi - lo;
        let mag = (0.5 * (lf[lo] - lf[hi]) + d as f64 * r.ln() - 0.5 * x).exp() * lag[d][lo];
        if m >= k {
            Complex64::from_polar(mag, d as f64 * theta)
        } else {
            // (-alpha*)^d
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::from_polar(sign * mag, -(d as f64) * theta)
        }
    })
}

/// `D(alpha) thermal(nbar) D(alpha)^dag` truncated to `trunc.dim`.
pub fn coherent_thermal_state(alpha: Complex64, nbar: f64, trunc: impl Into<Truncation>) -> Result<DensityMatrix> {
    let trunc = trunc.into();
    trunc.check()?;
    check_nbar("nbar", nbar)?;
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(invalid("alpha", "must be finite"));
    }
    let src = auto_dim(nbar, 1e-16).max(trunc.dim);
    let (w, _) = bose_einstein(nbar, src);
    let d = displacement_elements(alpha, trunc.dim, src);
    let mut rho = CMatrix::zeros(trunc.dim, trunc.dim);
    for (k, &p) in w.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let col = d.column(k);
        rho += (col * col.adjoint()) * Complex64::new(p, 0.0);
    }
    let state = DensityMatrix::from_parts(rho, vec![trunc.dim]);
    check_deficit(&trunc, state.trace_deficit(), alpha.norm_sqr() + nbar)?;
    Ok(state)
}

/// Two-mode squeezed vacuum `sum_n sqrt(N_S^n / (N_S+1)^(n+1)) |n, n>`;
/// mode 0 is the signal, mode 1 the idler.
pub fn tmsv_state(n_s: f64, trunc: impl Into<Truncation>) -> Result<DensityMatrix> {
    let trunc = trunc.into();
    trunc.check()?;
    check_nbar("n_s", n_s)?;
    let d = trunc.dim;
    let (w, tail) = bose_einstein(n_s, d);
    check_deficit(&trunc, tail, n_s)?;
    let mut rho = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            rho[(i * d + i, j * d + j)] = Complex64::new((w[i] * w[j]).sqrt(), 0.0);
        }
    }
    Ok(DensityMatrix::from_parts(rho, vec![d, d]).with_deficit(tail))
}
