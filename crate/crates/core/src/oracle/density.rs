use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::linalg::{eigenvalues, hermitian_defect, kron, trace_norm, CMatrix};
use crate::error::{invalid, Error, Result};

/// Default tolerance on the probability mass lost to truncation.
pub const DEFAULT_DEFICIT_TOL: f64 = 1e-6;
/// Largest tolerated `|rho_ij - conj(rho_ji)|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues down to `-EIGEN_CLAMP` count as rounding noise.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Per-mode Fock cutoff and the trace deficit it may leave behind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Truncation {
    pub dim: usize,
    pub deficit_tol: f64,
}

impl Truncation {
    pub fn new(dim: usize, deficit_tol: f64) -> Self {
        Self { dim, deficit_tol }
    }

    /// Smallest cutoff that holds `thermal(nbar)` within `deficit_tol`.
    pub fn auto(nbar: f64, deficit_tol: f64) -> Self {
        Self::new(auto_dim(nbar, deficit_tol), deficit_tol)
    }

    pub(crate) fn check(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(invalid("dim", format!("must be >= 2, got {}", self.dim)));
        }
        if !(self.deficit_tol > 0.0 && self.deficit_tol < 1.0) {
            return Err(invalid(
                "deficit_tol",
                format!("must lie in (0, 1), got {}", self.deficit_tol),
            ));
        }
        Ok(())
    }
}

impl From<usize> for Truncation {
    fn from(dim: usize) -> Self {
        Self::new(dim, DEFAULT_DEFICIT_TOL)
    }
}

/// `max(ceil(nbar + 8 sqrt(nbar (nbar + 1)) + 6), d_tail)` where `d_tail`
/// is the smallest cutoff whose thermal tail `(nbar/(nbar+1))^d` is below `tol`.
pub fn auto_dim(nbar: f64, tol: f64) -> usize {
    let nbar = nbar.max(0.0);
    let rule = (nbar + 8.0 * (nbar * (nbar + 1.0)).sqrt() + 6.0).ceil() as usize;
    if nbar == 0.0 {
        return rule;
    }
    let ratio = nbar / (nbar + 1.0);
    let tail = (tol.ln() / ratio.ln()).ceil() as usize;
    rule.max(tail)
}

/// Density operator on a tensor product of truncated Fock spaces.
///
/// Mode 0 is the most significant index. `trace_deficit` is the mass lost
/// to truncation when the state was built; it is kept when the matrix is
/// renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mode_dims: Vec<usize>,
    data: CMatrix,
    trace_deficit: f64,
}

impl DensityMatrix {
    /// Validates `data` against the density-operator invariants with trace
    /// tolerance `deficit_tol`.
    pub fn from_matrix(data: CMatrix, mode_dims: Vec<usize>, deficit_tol: f64) -> Result<Self> {
        let total: usize = mode_dims.iter().product();
        if data.nrows() != total || data.ncols() != total {
            return Err(Error::DimensionMismatch(data.nrows(), total));
        }
        let rho = Self::from_parts(data, mode_dims);
        rho.validate(deficit_tol)?;
        Ok(rho)
    }

    /// Builds without validation; the deficit is `1 - tr`.
    pub(crate) fn from_parts(data: CMatrix, mode_dims: Vec<usize>) -> Self {
        let trace_deficit = 1.0 - data.trace().re;
        Self {
            mode_dims,
            data,
            trace_deficit,
        }
    }

    pub(crate) fn with_deficit(mut self, deficit: f64) -> Self {
        self.trace_deficit = deficit;
        self
    }

    /// Single-mode diagonal state.
    pub(crate) fn diagonal_state(weights: &[f64]) -> Self {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            weights.len(),
            weights.iter().map(|&w| Complex64::new(w, 0.0)),
        ));
        Self::from_parts(d, vec![weights.len()])
    }

    /// Per-mode cutoff of mode 0.
    pub fn dim(&self) -> usize {
        self.mode_dims[0]
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn total_dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    pub fn trace(&self) -> f64 {
        self.data.trace().re
    }

    /// Checks Hermiticity, positivity (down to `-1e-10`) and `|1 - tr| <= deficit_tol`.
    pub fn validate(&self, deficit_tol: f64) -> Result<()> {
        let defect = hermitian_defect(&self.data);
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let min = eigenvalues(&self.data).first().copied().unwrap_or(0.0);
        if min < -EIGEN_CLAMP {
            return Err(Error::NotPositive(min));
        }
        let deficit = 1.0 - self.trace();
        if deficit.abs() > deficit_tol {
            return Err(Error::TruncationTooSmall {
                dim: self.dim(),
                deficit,
                tol: deficit_tol,
                suggested: self.dim() + (self.dim() / 2).max(2),
            });
        }
        Ok(())
    }

    /// Copy scaled to unit trace.
    pub fn renormalized(&self) -> Self {
        let t = self.trace();
        Self {
            mode_dims: self.mode_dims.clone(),
            data: self.data.map(|z| z / t),
            trace_deficit: self.trace_deficit,
        }
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `||rho - sigma||_1 / 2`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        self.same_shape(other)?;
        Ok(0.5 * trace_norm(&(&self.data - &other.data)))
    }

    pub(crate) fn same_shape(&self, other: &Self) -> Result<()> {
        if self.mode_dims != other.mode_dims {
            return Err(Error::DimensionMismatch(self.total_dim(), other.total_dim()));
        }
        Ok(())
    }

    /// `self (x) other`; modes of `self` come first.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.mode_dims.clone();
        dims.extend_from_slice(&other.mode_dims);
        let deficit = 1.0 - (1.0 - self.trace_deficit) * (1.0 - other.trace_deficit);
        Self {
            mode_dims: dims,
            data: kron(&self.data, &other.data),
            trace_deficit: deficit,
        }
    }

    /// Reduced state on the modes in `keep` (kept in their original order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.mode_dims.len();
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.iter().any(|&k| k >= n) {
            return Err(invalid("keep", format!("mode index out of range for {n} modes")));
        }
        let traced: Vec<usize> = (0..n).filter(|m| !keep.contains(m)).collect();
        let kept_dims: Vec<usize> = keep.iter().map(|&k| self.mode_dims[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| self.mode_dims[k]).collect();
        let dk: usize = kept_dims.iter().product();
        let dt: usize = traced_dims.iter().product();
        let strides = strides(&self.mode_dims);
        let index = |kept: usize, tr: usize| -> usize {
            let mut idx = 0;
            let mut rem = kept;
            for (pos, &m) in keep.iter().enumerate().rev() {
                idx += (rem % kept_dims[pos]) * strides[m];
                rem /= kept_dims[pos];
            }
            let mut rem = tr;
            for (pos, &m) in traced.iter().enumerate().rev() {
                idx += (rem % traced_dims[pos]) * strides[m];
                rem /= traced_dims[pos];
            }
            idx
        };
        let mut out = CMatrix::zeros(dk, dk);
        for i in 0..dk {
            for j in 0..dk {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in 0..dt {
                    acc += self.data[(index(i, t), index(j, t))];
                }
                out[(i, j)] = acc;
            }
        }
        Ok(Self {
            mode_dims: kept_dims,
            data: out,
            trace_deficit: self.trace_deficit,
        })
    }

    /// Diagonal of the density matrix.
    pub fn diagonal(&self) -> Vec<f64> {
        self.data.diagonal().iter().map(|z| z.re).collect()
    }

    /// Photon-number distribution of one mode.
    pub fn photon_distribution(&self, mode: usize) -> Result<Vec<f64>> {
        Ok(self.partial_trace(&[mode])?.diagonal())
    }

    /// `<n>` of one mode.
    pub fn mean_photons(&self, mode: usize) -> Result<f64> {
        Ok(self
            .photon_distribution(mode)?
            .iter()
            .enumerate()
            .map(|(n, p)| n as f64 * p)
            .sum())
    }

    /// `tr(rho X)` without forming the product.
    pub fn expect(&self, op: &CMatrix) -> Complex64 {
        let n = self.total_dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for k in 0..n {
                acc += self.data[(j, k)] * op[(k, j)];
            }
        }
        acc
    }
}

/// Row-major strides for a list of mode dimensions.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for m in (0..dims.len().saturating_sub(1)).rev() {
        s[m] = s[m + 1] * dims[m + 1];
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn auto_dim_rules() {
        assert_eq!(auto_dim(0.0, 1e-6), 6);
        // rule: 1 + 8 sqrt(2) + 6 = 18.31; tail: ln(1e-6)/ln(1/2) = 19.93
        assert_eq!(auto_dim(1.0, 1e-6), 20);
        assert_eq!(auto_dim(0.1, 1e-6), 9);
        let d = auto_dim(5.0, 1e-12);
        assert!((5.0f64 / 6.0).powi(d as i32) <= 1e-12);
        assert!((5.0f64 / 6.0).powi(d as i32 - 1) > 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(1.0);
        m[(0, 1)] = c(0.1);
        let err = DensityMatrix::from_matrix(m, vec![2], 1e-6).unwrap_err();
        assert!(matches!(err, Error::NotHermitian(_)));
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.1), c(-0.1)]));
        assert!(matches!(
            DensityMatrix::from_matrix(m, vec![2], 1e-6),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn clamps_rounding_negativity() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0 + 1e-11), c(-1e-11)]));
        assert!(DensityMatrix::from_matrix(m, vec![2], 1e-6).is_ok());
    }

    #[test]
    fn partial_trace_of_product_state() {
        let a = DensityMatrix::diagonal_state(&[0.7, 0.3]);
        let b = DensityMatrix::diagonal_state(&[0.2, 0.5, 0.3]);
        let ab = a.tensor(&b);
        assert_eq!(ab.mode_dims(), &[2, 3]);
        let ra = ab.partial_trace(&[0]).unwrap();
        let rb = ab.partial_trace(&[1]).unwrap();
        assert!(ra.trace_distance(&a).unwrap() < 1e-15);
        assert!(rb.trace_distance(&b).unwrap() < 1e-15);
        let ba = b.tensor(&a);
        let again = ab.tensor(&b).partial_trace(&[1, 2]).unwrap();
        assert!(again.trace_distance(&b.tensor(&b)).unwrap() < 1e-15);
        assert_eq!(ba.mode_dims(), &[3, 2]);
    }

    #[test]
    fn purity_and_trace_distance() {
        let a = DensityMatrix::diagonal_state(&[1.0, 0.0]);
        let b = DensityMatrix::diagonal_state(&[0.0, 1.0]);
        let mix = DensityMatrix::diagonal_state(&[0.5, 0.5]);
        assert_eq!(a.purity(), 1.0);
        assert_eq!(mix.purity(), 0.5);
        assert_eq!(a.trace_distance(&b).unwrap(), 1.0);
        assert!(a.trace_distance(&mix.tensor(&mix)).is_err());
    }

    #[test]
    fn renormalization_keeps_deficit() {
        let a = DensityMatrix::diagonal_state(&[0.5, 0.25]);
        assert_eq!(a.trace_deficit(), 0.25);
        let n = a.renormalized();
        assert!((n.trace() - 1.0).abs() < 1e-15);
        assert_eq!(n.trace_deficit(), 0.25);
        assert!(a.validate(1e-6).is_err());
        assert!(n.validate(1e-6).is_ok());
    }
}
