//! Return/idler Wigner covariance matrices and moment extraction.
//!
//! Quadratures are `q = (a + a^dag)/2`, `p = (a - a^dag)/(2i)` ordered
//! `(q_R, p_R, q_I, p_I)`; vacuum variance is `1/4`.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::Serialize;

use super::density::DensityMatrix;
use super::linalg::{kron, CMatrix};
use crate::error::{invalid, Result};
use crate::params::Hypothesis;

/// Covariance matrix of one return/idler mode pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceMatrix {
    pub matrix: Matrix4<f64>,
    /// `sqrt(kappa N_S (N_S + 1))`.
    pub c_p: f64,
}

impl CovarianceMatrix {
    /// Block form with return brightness `n_b`:
    /// `[[(2 N_B + 1) I, 2 C_p R_h], [2 C_p R_h, (2 N_S + 1) I]] / 4`
    /// where `R_h = cos(phi) Z + sin(phi) X` under `Present` and zero under
    /// `Absent`.
    pub fn new(hypothesis: Hypothesis, n_s: f64, n_b: f64, kappa: f64, phi: f64) -> Result<Self> {
        if !(n_s >= 0.0 && n_b >= 0.0) {
            return Err(invalid("n_s", "brightnesses must be >= 0"));
        }
        if !(0.0..=1.0).contains(&kappa) {
            return Err(invalid("kappa", format!("must lie in [0, 1], got {kappa}")));
        }
        let c_p = (kappa * n_s * (n_s + 1.0)).sqrt();
        let z = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        let x = Matrix2::new(0.0, 1.0, 1.0, 0.0);
        let r_h = match hypothesis {
            Hypothesis::Absent => Matrix2::zeros(),
            Hypothesis::Present => z * phi.cos() + x * phi.sin(),
        };
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0)
            .copy_from(&(Matrix2::identity() * (2.0 * n_b + 1.0)));
        m.fixed_view_mut::<2, 2>(2, 2)
            .copy_from(&(Matrix2::identity() * (2.0 * n_s + 1.0)));
        m.fixed_view_mut::<2, 2>(0, 2).copy_from(&(r_h * (2.0 * c_p)));
        m.fixed_view_mut::<2, 2>(2, 0)
            .copy_from(&(r_h.transpose() * (2.0 * c_p)));
        Ok(Self { matrix: m / 4.0, c_p })
    }

    /// Same block form with the return brightness the channel actually
    /// produces: `N_B` under `Absent`, `N_B + kappa N_S` under `Present`.
    pub fn exact(hypothesis: Hypothesis, n_s: f64, n_b: f64, kappa: f64, phi: f64) -> Result<Self> {
        let n_r = match hypothesis {
            Hypothesis::Absent => n_b,
            Hypothesis::Present => n_b + kappa * n_s,
        };
        Self::new(hypothesis, n_s, n_r, kappa, phi)
    }
}

/// First moments and symmetrized covariance of a two-mode state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean: Vector4<f64>,
    pub covariance: Matrix4<f64>,
}

fn annihilation(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| {
        Complex64::new(if j == i + 1 { (j as f64).sqrt() } else { 0.0 }, 0.0)
    })
}

/// Moments of `(q_R, p_R, q_I, p_I)` for a two-mode state (mode 0 = R).
pub fn covariance_from_state(rho: &DensityMatrix) -> Result<Moments> {
    let dims = rho.mode_dims();
    if dims.len() != 2 {
        return Err(invalid("rho", format!("expected two modes, got {}", dims.len())));
    }
    let (dr, di) = (dims[0], dims[1]);
    let (ar, ai) = (annihilation(dr), annihilation(di));
    let (ir, ii) = (CMatrix::identity(dr, dr), CMatrix::identity(di, di));
    // b = (a_R, a_R^dag, a_I, a_I^dag) as single-mode factors
    let single: [(usize, CMatrix); 4] = [(0, ar.clone()), (0, ar.adjoint()), (1, ai.clone()), (1, ai.adjoint())];
    let embed = |mode: usize, op: &CMatrix| if mode == 0 { kron(op, &ii) } else { kron(&ir, op) };
    let first: Vec<Complex64> = single.iter().map(|(m, op)| rho.expect(&embed(*m, op))).collect();
    let mut second = [[Complex64::new(0.0, 0.0); 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            let (mk, ok) = &single[k];
            let (ml, ol) = &single[l];
            let op = if mk == ml {
                embed(*mk, &(ok * ol))
            } else if *mk == 0 {
                kron(ok, ol)
            } else {
                kron(ol, ok)
            };
            second[k][l] = rho.expect(&op);
        }
    }
    let h = Complex64::new(0.5, 0.0);
    let hi = Complex64::new(0.0, 0.5);
    // q = (a + a^dag)/2, p = (a - a^dag)/(2i) = -i/2 a + i/2 a^dag
    let lmap = [
        [h, h, Complex64::default(), Complex64::default()],
        [-hi, hi, Complex64::default(), Complex64::default()],
        [Complex64::default(), Complex64::default(), h, h],
        [Complex64::default(), Complex64::default(), -hi, hi],
    ];
    let mut mean = Vector4::zeros();
    let mut cov = Matrix4::zeros();
    for i in 0..4 {
        let mut m = Complex64::default();
        for k in 0..4 {
            m += lmap[i][k] * first[k];
        }
        mean[i] = m.re;
    }
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = Complex64::default();
            for k in 0..4 {
                for l in 0..4 {
                    let sym = (second[k][l] + second[l][k]) * 0.5 - first[k] * first[l];
                    acc += lmap[i][k] * lmap[j][l] * sym;
                }
            }
            cov[(i, j)] = acc.re;
        }
    }
    Ok(Moments { mean, covariance: cov })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::channel::apply_return_channel;
    use crate::oracle::states::{thermal_state, tmsv_state};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn vacuum_and_thermal_blocks() {
        let rho = thermal_state(0.0, 4).unwrap().tensor(&thermal_state(0.0, 4).unwrap());
        let m = covariance_from_state(&rho).unwrap();
        assert!((m.covariance - Matrix4::identity() / 4.0).abs().max() < 1e-15);
        let cm = CovarianceMatrix::new(Hypothesis::Absent, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(cm.matrix, Matrix4::identity() / 4.0);
    }

    #[test]
    fn tmsv_is_lossless_return() {
        let m = covariance_from_state(&tmsv_state(0.2, 30).unwrap()).unwrap();
        let cm = CovarianceMatrix::new(Hypothesis::Present, 0.2, 0.2, 1.0, 0.0).unwrap();
        assert!((m.covariance - cm.matrix).abs().max() < 1e-12);
        assert!(m.mean.abs().max() < 1e-15);
    }

    #[test]
    fn channel_output_matches_block_form() {
        let (n_s, kappa, phi, n_b) = (0.1, 0.3, FRAC_PI_4, 0.5);
        let tmsv = tmsv_state(n_s, 24).unwrap();
        let out = apply_return_channel(&tmsv, kappa, phi, n_b / (1.0 - kappa), 1e-6).unwrap();
        let m = covariance_from_state(&out).unwrap();
        let exact = CovarianceMatrix::exact(Hypothesis::Present, n_s, n_b, kappa, phi).unwrap();
        assert!((m.covariance - exact.matrix).abs().max() < 1e-9);
        // the N_B-only form differs by kappa N_S / 2 on the return diagonal
        let printed = CovarianceMatrix::new(Hypothesis::Present, n_s, n_b, kappa, phi).unwrap();
        let gap = m.covariance - printed.matrix;
        assert!((gap[(0, 0)] - kappa * n_s / 2.0).abs() < 1e-9);
        assert!((gap[(1, 1)] - kappa * n_s / 2.0).abs() < 1e-9);
        assert!(gap.fixed_view::<2, 2>(0, 2).abs().max() < 1e-9);
    }

    #[test]
    fn displaced_state_mean() {
        use crate::oracle::states::coherent_thermal_state;
        let z = Complex64::from_polar(0.5, 0.4);
        let rho = coherent_thermal_state(z, 0.0, 20)
            .unwrap()
            .tensor(&thermal_state(0.0, 3).unwrap());
        let m = covariance_from_state(&rho).unwrap();
        assert!((m.mean[0] - z.re).abs() < 1e-12);
        assert!((m.mean[1] - z.im).abs() < 1e-12);
        assert!((m.covariance - Matrix4::identity() / 4.0).abs().max() < 1e-10);
    }
}
