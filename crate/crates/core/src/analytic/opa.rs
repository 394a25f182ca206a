//! Optical-parametric-amplifier receiver SNRs.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::params::SystemParams;

/// Separation factor used to report the `<<` conditions on the gain.
const WINDOW_FACTOR: f64 = 10.0;

/// OPA gain setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpaConfig {
    /// `G - 1`.
    pub gain_minus_one: f64,
    /// Whether `max(N_S/N_B, N_S/(kappa_bar N_B^2)) << G - 1 << 1` holds with
    /// `<<` read as a factor of ten. Informational only.
    pub in_window: bool,
}

impl OpaConfig {
    pub fn new(params: &SystemParams, gain_minus_one: f64) -> Result<Self> {
        if !(gain_minus_one > 0.0 && gain_minus_one.is_finite()) {
            return Err(invalid("gain_minus_one", format!("must be > 0, got {gain_minus_one}")));
        }
        let (n_s, n_b, kb) = (params.n_s(), params.n_b(), params.kappa_bar());
        let lower = (n_s / n_b).max(n_s / (kb * n_b * n_b));
        let in_window = WINDOW_FACTOR * lower <= gain_minus_one && WINDOW_FACTOR * gain_minus_one <= 1.0;
        Ok(Self {
            gain_minus_one,
            in_window,
        })
    }
}

/// `G - 1 = sqrt(N_S) / N_B`.
pub fn opa_default_gain(params: &SystemParams) -> OpaConfig {
    OpaConfig::new(params, params.n_s().sqrt() / params.n_b()).expect("default gain is positive")
}

/// Rayleigh-fading OPA SNR:
/// `M (G-1) (kappa_bar N_S)^2 / N_B / (1 + sqrt(1 + 2x))^2`.
pub fn opa_snr_fading(params: &SystemParams, opa: &OpaConfig) -> f64 {
    let kn = params.kappa_bar() * params.n_s();
    let root = 1.0 + (1.0 + 2.0 * params.derived_x()).sqrt();
    params.m() * opa.gain_minus_one * kn * kn / params.n_b() / (root * root)
}

/// Known-target OPA SNR `M kappa N_S / N_B`.
pub fn opa_snr_known(params: &SystemParams, kappa: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(invalid("kappa", format!("must lie in [0, 1], got {kappa}")));
    }
    Ok(params.m() * kappa * params.n_s() / params.n_b())
}
