//! Helstrom error probability and quantum Chernoff bound.

use num_complex::Complex64;
use serde::Serialize;

use super::density::{DensityMatrix, EIGEN_CLAMP};
use super::linalg::{eigh_block, hermitian_blocks, trace_norm, EigenBlock};
use crate::error::{invalid, Error, Result};
use crate::numerics::{golden_section, pairwise_sum};

/// Search tolerance on `s` for the Chernoff minimization.
pub const QCB_S_TOL: f64 = 1e-6;

/// Single-copy discrimination figures of merit for equal priors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscriminationReport {
    pub helstrom_error: f64,
    /// `-ln min_s tr(rho0^s rho1^(1-s))`.
    pub qcb_exponent: f64,
    pub optimal_s: f64,
}

impl DiscriminationReport {
    /// `helstrom_error <= exp(-qcb_exponent) / 2 + 1e-10`.
    pub fn satisfies_bound(&self) -> bool {
        self.helstrom_error <= 0.5 * (-self.qcb_exponent).exp() + 1e-10
    }
}

fn check_prior(pi0: f64) -> Result<()> {
    if (0.0..=1.0).contains(&pi0) {
        Ok(())
    } else {
        Err(invalid("pi0", format!("must lie in [0, 1], got {pi0}")))
    }
}

/// Minimum error probability `(pi0 tr rho0 + pi1 tr rho1 - ||pi1 rho1 - pi0 rho0||_1) / 2`.
///
/// For unit-trace inputs this is the usual `(1 - ||pi1 rho1 - pi0 rho0||_1) / 2`;
/// the trace terms keep the value meaningful for truncated states.
pub fn helstrom(rho0: &DensityMatrix, rho1: &DensityMatrix, pi0: f64) -> Result<f64> {
    rho0.same_shape(rho1)?;
    check_prior(pi0)?;
    let pi1 = 1.0 - pi0;
    let gamma = rho1.matrix() * Complex64::new(pi1, 0.0) - rho0.matrix() * Complex64::new(pi0, 0.0);
    let total = pi0 * rho0.trace() + pi1 * rho1.trace();
    let p = 0.5 * (total - trace_norm(&gamma));
    Ok(p.clamp(0.0, pi0.min(pi1)))
}

/// Eigenvalues with rounding noise removed: values in `[-1e-10, 0)` and
/// values below the solver's noise floor inside non-trivial blocks become 0.
fn clamped(block: &EigenBlock) -> Result<Vec<f64>> {
    let k = block.values.len();
    let scale = block.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let noise = if k > 1 {
        8.0 * f64::EPSILON * k as f64 * scale
    } else {
        0.0
    };
    block
        .values
        .iter()
        .map(|&v| {
            if v < -EIGEN_CLAMP {
                Err(Error::NotPositive(v))
            } else if v <= noise {
                Ok(0.0)
            } else {
                Ok(v)
            }
        })
        .collect()
}

fn power(v: f64, s: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.powf(s)
    }
}

/// Spectral data for evaluating `tr(rho0^s rho1^(1-s))` blockwise.
struct ChernoffTerms {
    /// `(lambda_i, mu_j, |<a_i|b_j>|^2)` with nonzero overlap.
    terms: Vec<(f64, f64, f64)>,
}

impl ChernoffTerms {
    fn new(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<Self> {
        let (m0, m1) = (rho0.matrix(), rho1.matrix());
        let mut terms = Vec::new();
        for idx in hermitian_blocks(&[m0, m1]) {
            let b0 = eigh_block(m0, &idx);
            let b1 = eigh_block(m1, &idx);
            let (l0, l1) = (clamped(&b0)?, clamped(&b1)?);
            let overlap = b0.vectors.adjoint() * &b1.vectors;
            for (i, &a) in l0.iter().enumerate() {
                for (j, &b) in l1.iter().enumerate() {
                    let w = overlap[(i, j)].norm_sqr();
                    if w > 0.0 && (a > 0.0 || b > 0.0) {
                        terms.push((a, b, w));
                    }
                }
            }
        }
        Ok(Self { terms })
    }

    fn q(&self, s: f64) -> f64 {
        let v: Vec<f64> = self
            .terms
            .iter()
            .map(|&(a, b, w)| power(a, s) * power(b, 1.0 - s) * w)
            .collect();
        pairwise_sum(&v)
    }
}

/// `tr(rho0^s rho1^(1-s))` at one value of `s`.
pub fn chernoff_q(rho0: &DensityMatrix, rho1: &DensityMatrix, s: f64) -> Result<f64> {
    rho0.same_shape(rho1)?;
    Ok(ChernoffTerms::new(rho0, rho1)?.q(s))
}

fn check_normalized(name: &'static str, rho: &DensityMatrix) -> Result<()> {
    if (rho.trace() - 1.0).abs() > 1e-6 {
        return Err(invalid(name, format!("must have unit trace, got {}", rho.trace())));
    }
    Ok(())
}

/// Quantum Chernoff exponent by golden-section search over `s` in `[0, 1]`,
/// together with the equal-prior Helstrom error.
pub fn qcb(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<DiscriminationReport> {
    rho0.same_shape(rho1)?;
    check_normalized("rho0", rho0)?;
    check_normalized("rho1", rho1)?;
    let terms = ChernoffTerms::new(rho0, rho1)?;
    let best = golden_section(|s| terms.q(s), 0.0, 1.0, QCB_S_TOL);
    let q_min = best.value.clamp(0.0, 1.0);
    Ok(DiscriminationReport {
        helstrom_error: helstrom(rho0, rho1, 0.5)?,
        qcb_exponent: if q_min > 0.0 {
            (-q_min.ln()).max(0.0)
        } else {
            f64::INFINITY
        },
        optimal_s: best.x,
    })
}
