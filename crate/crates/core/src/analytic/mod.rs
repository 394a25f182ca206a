//! Closed-form performance of the classical heterodyne receiver and the
//! QI OPA / SFG receivers against Rayleigh-fading targets.

mod ci;
mod opa;
mod roc;
mod sfg;

use serde::Serialize;

pub use ci::{ci_bayes, ci_bayes_asymptotic, ci_objective, ci_roc, ci_roc_on_grid, ci_snr, CI_ROC_POINTS};
pub use opa::{opa_default_gain, opa_snr_fading, opa_snr_known, OpaConfig};
pub use roc::{Interpolation, PointKind, RocCurve, RocPoint};
pub use sfg::{
    sfg_bayes, sfg_bayes_limit, sfg_error, sfg_mean_counts, sfg_roc, sfg_roc_from_means, sfg_threshold, sfg_vertex,
    SfgMeans,
};

/// Decision rule chosen by a Bayes-optimal receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", content = "value", rename_all = "snake_case")]
pub enum Threshold {
    /// Declare "present" iff the photon count exceeds this value.
    Count(u64),
    /// Declare "present" regardless of the observation.
    AlwaysPresent,
    /// Declare "absent" regardless of the observation.
    NeverPresent,
    /// Envelope test operated at this false-alarm probability.
    FalseAlarm(f64),
}

/// Operating point minimizing `pi0 P_F + pi1 (1 - P_D)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BayesResult {
    pub threshold: Threshold,
    pub p_false_alarm: f64,
    pub p_detect: f64,
    pub p_error: f64,
}

impl BayesResult {
    pub(crate) fn new(threshold: Threshold, p_false_alarm: f64, p_detect: f64, pi0: f64) -> Self {
        Self {
            threshold,
            p_false_alarm,
            p_detect,
            p_error: pi0 * p_false_alarm + (1.0 - pi0) * (1.0 - p_detect),
        }
    }

    /// Decision from the priors alone; ties go to "absent".
    pub(crate) fn prior_only(pi0: f64) -> Self {
        if 1.0 - pi0 > pi0 {
            Self::new(Threshold::AlwaysPresent, 1.0, 1.0, pi0)
        } else {
            Self::new(Threshold::NeverPresent, 0.0, 0.0, pi0)
        }
    }
}
