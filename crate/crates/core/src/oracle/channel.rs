//! Thermal-loss return channel acting on mode 0.
//!
//! `a_R = sqrt(kappa) e^{i phi} a_S + sqrt(1 - kappa) a_E` with a thermal
//! environment of mean `N_E` is applied as pure loss with transmissivity
//! `kappa / G`, then a quantum-limited amplifier of gain
//! `G = 1 + (1 - kappa) N_E`, then a phase rotation. Both routes give the
//! same phase-insensitive Gaussian channel.

use num_complex::Complex64;

use super::density::{auto_dim, DensityMatrix, Truncation};
use super::linalg::CMatrix;
use super::states::tmsv_state;
use crate::error::{invalid, Error, Result};
use crate::numerics::{log_binomial, log_factorials};
use crate::params::{FadingSample, Hypothesis};

/// Kraus operator `|n> -> coeffs[n] |n + shift>` on mode 0.
struct ShiftKraus {
    shift: isize,
    coeffs: Vec<f64>,
}

fn loss_kraus(tau: f64, d: usize, lf: &[f64]) -> Vec<ShiftKraus> {
    (0..d)
        .map(|k| ShiftKraus {
            shift: -(k as isize),
            coeffs: (0..d)
                .map(|n| {
                    if n < k {
                        0.0
                    } else {
                        (0.5 * log_binomial(lf, n, k)).exp()
                            * tau.powf((n - k) as f64 / 2.0)
                            * (1.0 - tau).powf(k as f64 / 2.0)
                    }
                })
                .collect(),
        })
        .collect()
}

fn amplifier_kraus(gain: f64, d: usize, lf: &[f64]) -> Vec<ShiftKraus> {
    let excess = 1.0 - 1.0 / gain;
    (0..d)
        .map(|k| ShiftKraus {
            shift: k as isize,
            coeffs: (0..d)
                .map(|n| {
                    if n + k >= d {
                        0.0
                    } else {
                        (0.5 * log_binomial(lf, n + k, k)).exp()
                            * gain.powf(-((n + 1) as f64) / 2.0)
                            * excess.powf(k as f64 / 2.0)
                    }
                })
                .collect(),
        })
        .collect()
}

fn apply_mode0(rho: &CMatrix, d: usize, rest: usize, ops: &[ShiftKraus]) -> CMatrix {
    let total = d * rest;
    let mut out = CMatrix::zeros(total, total);
    for op in ops {
        if op.shift == 0 && op.coeffs.iter().all(|&c| c == 1.0) {
            out += rho;
            continue;
        }
        let target = |n: usize| -> Option<usize> {
            let t = n as isize + op.shift;
            (t >= 0 && (t as usize) < d && op.coeffs[n] != 0.0).then_some(t as usize)
        };
        for n in 0..d {
            let Some(t) = target(n) else { continue };
            for n2 in 0..d {
                let Some(t2) = target(n2) else { continue };
                let w = op.coeffs[n] * op.coeffs[n2];
                for r in 0..rest {
                    for r2 in 0..rest {
                        out[(t * rest + r, t2 * rest + r2)] += rho[(n * rest + r, n2 * rest + r2)] * w;
                    }
                }
            }
        }
    }
    out
}

/// Thermal-loss channel on mode 0 with `n_added = (1 - kappa) N_E` noise
/// photons at the output.
pub(crate) fn thermal_loss(
    state: &DensityMatrix,
    kappa: f64,
    phi: f64,
    n_added: f64,
    deficit_tol: f64,
) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(invalid("kappa", format!("must lie in [0, 1], got {kappa}")));
    }
    if !phi.is_finite() {
        return Err(invalid("phi", "must be finite"));
    }
    if !(n_added >= 0.0 && n_added.is_finite()) {
        return Err(invalid(
            "n_b_eff",
            format!("added noise must be finite and >= 0, got {n_added}"),
        ));
    }
    let dims = state.mode_dims().to_vec();
    let d = dims[0];
    let rest: usize = dims[1..].iter().product();
    let lf = log_factorials(2 * d);
    let gain = 1.0 + n_added;
    let mut rho = state.matrix().clone();
    if kappa / gain != 1.0 {
        rho = apply_mode0(&rho, d, rest, &loss_kraus(kappa / gain, d, &lf));
    }
    if gain != 1.0 {
        rho = apply_mode0(&rho, d, rest, &amplifier_kraus(gain, d, &lf));
    }
    if phi != 0.0 {
        let total = d * rest;
        for a in 0..total {
            for b in 0..total {
                let dn = (a / rest) as f64 - (b / rest) as f64;
                if dn != 0.0 {
                    rho[(a, b)] *= Complex64::from_polar(1.0, phi * dn);
                }
            }
        }
    }
    let out = DensityMatrix::from_parts(rho, dims);
    if out.trace_deficit() > deficit_tol {
        let n_in = state.mean_photons(0).unwrap_or(0.0);
        return Err(Error::TruncationTooSmall {
            dim: d,
            deficit: out.trace_deficit(),
            tol: deficit_tol,
            suggested: auto_dim(kappa * n_in + n_added, deficit_tol).max(d + 1),
        });
    }
    Ok(out)
}

/// Mixes mode 0 with a thermal environment of mean `n_b_eff` on a
/// transmissivity-`kappa` beam splitter, applies phase `phi` and traces
/// out the environment. Other modes are untouched.
///
/// `n_b_eff` is ignored at `kappa = 1`.
pub fn apply_return_channel(
    state: &DensityMatrix,
    kappa: f64,
    phi: f64,
    n_b_eff: f64,
    deficit_tol: f64,
) -> Result<DensityMatrix> {
    let n_added = if kappa == 1.0 { 0.0 } else { (1.0 - kappa) * n_b_eff };
    thermal_loss(state, kappa, phi, n_added, deficit_tol)
}

/// Single-copy return/idler state for one fading draw.
///
/// Under `Present` the environment mean is `N_B / (1 - kappa)`, so the
/// return mode always carries `N_B` noise photons; under `Absent` the
/// return mode is thermal `N_B` and uncorrelated with the idler.
pub fn conditional_state(
    hypothesis: Hypothesis,
    n_s: f64,
    n_b: f64,
    sample: FadingSample,
    trunc: impl Into<Truncation>,
) -> Result<DensityMatrix> {
    let trunc = trunc.into();
    let tmsv = tmsv_state(n_s, trunc)?;
    match hypothesis {
        Hypothesis::Absent => thermal_loss(&tmsv, 0.0, 0.0, n_b, trunc.deficit_tol),
        Hypothesis::Present => thermal_loss(&tmsv, sample.kappa().min(1.0), sample.phase, n_b, trunc.deficit_tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::states::thermal_state;
    use std::f64::consts::FRAC_PI_4;

    /// Explicit beam splitter with a truncated thermal environment:
    /// `a_S^dag -> t b_R^dag - r b_E^dag`, `a_E^dag -> r b_R^dag + t* b_E^dag`.
    #[allow(clippy::needless_range_loop)]
    fn beam_splitter_oracle(rho_si: &DensityMatrix, kappa: f64, phi: f64, n_e: f64, d_e: usize) -> CMatrix {
        let d = rho_si.dim();
        let t = Complex64::from_polar(kappa.sqrt(), phi);
        let r = Complex64::new((1.0 - kappa).sqrt(), 0.0);
        let d_env_out = d + d_e;
        let lf = log_factorials(2 * d_env_out);
        let fact = |n: usize| lf[n].exp();
        // v[n][m][(a, e)] amplitude of |a>_R |e>_E for input |n>_S |m>_E
        let mut v = vec![vec![CMatrix::zeros(d, d_env_out); d_e]; d];
        for n in 0..d {
            for m in 0..d_e {
                let norm = 1.0 / (fact(n) * fact(m)).sqrt();
                for j in 0..=n {
                    for l in 0..=m {
                        let a = j + l;
                        let e = n + m - a;
                        if a >= d {
                            continue;
                        }
                        let c = fact(n) / (fact(j) * fact(n - j)) * fact(m) / (fact(l) * fact(m - l));
                        let amp = t.powu(j as u32)
                            * (-r).powu((n - j) as u32)
                            * r.powu(l as u32)
                            * t.conj().powu((m - l) as u32)
                            * (c * norm * (fact(a) * fact(e)).sqrt());
                        v[n][m][(a, e)] += amp;
                    }
                }
            }
        }
        let ratio = n_e / (n_e + 1.0);
        let total = d * d;
        let rho = rho_si.matrix();
        let mut out = CMatrix::zeros(total, total);
        for m in 0..d_e {
            let p = ratio.powi(m as i32) / (n_e + 1.0);
            for n in 0..d {
                for n2 in 0..d {
                    let overlap = &v[n][m] * v[n2][m].adjoint();
                    for i in 0..d {
                        for i2 in 0..d {
                            let c = rho[(n * d + i, n2 * d + i2)] * p;
                            if c == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            for a in 0..d {
                                for a2 in 0..d {
                                    out[(a * d + i, a2 * d + i2)] += c * overlap[(a, a2)];
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn matches_explicit_beam_splitter() {
        let tmsv = tmsv_state(0.1, 8).unwrap();
        for &(kappa, phi, n_e) in &[(0.3, FRAC_PI_4, 0.2), (0.7, -1.0, 0.05), (0.0, 0.0, 0.3)] {
            let fast = apply_return_channel(&tmsv, kappa, phi, n_e, 1e-2).unwrap();
            let slow = beam_splitter_oracle(&tmsv, kappa, phi, n_e, 16);
            let diff = (fast.matrix() - slow).camax();
            assert!(diff < 1e-10, "kappa={kappa}: {diff}");
        }
    }

    #[test]
    fn zero_reflectivity_returns_thermal_background() {
        let tmsv = tmsv_state(0.2, 12).unwrap();
        let out = apply_return_channel(&tmsv, 0.0, 0.3, 0.4, 1e-4).unwrap();
        let expect = thermal_state(0.4, Truncation::new(12, 1e-4))
            .unwrap()
            .tensor(&tmsv.partial_trace(&[1]).unwrap());
        assert!(out.trace_distance(&expect).unwrap() < 1e-13);
    }

    #[test]
    fn lossless_returns_signal() {
        let tmsv = tmsv_state(0.3, 15).unwrap();
        let out = apply_return_channel(&tmsv, 1.0, 0.0, f64::INFINITY, 1e-6).unwrap();
        assert!((out.matrix() - tmsv.matrix()).camax() < 1e-15);
    }

    #[test]
    fn mean_photon_number() {
        let tmsv = tmsv_state(0.1, 24).unwrap();
        let out = apply_return_channel(&tmsv, 0.3, 1.0, 0.5 / 0.7, 1e-6).unwrap();
        assert!((out.mean_photons(0).unwrap() - (0.3 * 0.1 + 0.5)).abs() < 1e-9);
        assert!(out.validate(1e-6).is_ok());
    }

    #[test]
    fn reports_truncation() {
        let tmsv = tmsv_state(0.1, 6).unwrap();
        assert!(matches!(
            apply_return_channel(&tmsv, 0.3, 0.0, 5.0, 1e-6),
            Err(Error::TruncationTooSmall { .. })
        ));
    }

    #[test]
    fn absent_equals_present_at_zero_amplitude() {
        let zero = FadingSample {
            amplitude: 0.0,
            phase: 1.2,
        };
        let a = conditional_state(Hypothesis::Absent, 0.1, 0.3, zero, Truncation::new(5, 1e-2)).unwrap();
        let b = conditional_state(Hypothesis::Present, 0.1, 0.3, zero, Truncation::new(5, 1e-2)).unwrap();
        assert_eq!(a, b);
    }
}
