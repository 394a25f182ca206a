//! Classical illumination: coherent-state transmitter, heterodyne
//! reception, matched filter and square-law envelope detection.

use super::roc::{Interpolation, PointKind, RocCurve, RocPoint};
use super::{BayesResult, Threshold};
use crate::error::{Error, Result};
use crate::numerics::log_space;
use crate::params::SystemParams;

/// Default number of samples on the CI ROC grid.
pub const CI_ROC_POINTS: usize = 200;

fn roc_exponent(params: &SystemParams) -> f64 {
    1.0 / (1.0 + params.derived_x())
}

/// `P_D = P_F^(1/(1+x))` sampled on a log grid from `1e-12` to 1.
pub fn ci_roc(params: &SystemParams) -> RocCurve {
    ci_roc_on_grid(params, 1e-12, CI_ROC_POINTS)
}

/// Same curve on a log grid from `p_false_alarm_min` to 1, preceded by the
/// (0, 0) endpoint.
pub fn ci_roc_on_grid(params: &SystemParams, p_false_alarm_min: f64, points: usize) -> RocCurve {
    let c = roc_exponent(params);
    let grid = log_space(p_false_alarm_min, 1.0, points.max(2));
    let mut out = Vec::with_capacity(grid.len() + 1);
    out.push(RocPoint {
        p_false_alarm: 0.0,
        p_detect: 0.0,
        kind: PointKind::Endpoint,
    });
    for &pf in &grid {
        out.push(RocPoint {
            p_false_alarm: pf,
            p_detect: pf.powf(c),
            kind: if pf == 1.0 {
                PointKind::Endpoint
            } else {
                PointKind::Sample
            },
        });
    }
    RocCurve::from_sorted(out, Interpolation::Continuous)
}

/// `pi0 P_F + pi1 (1 - P_F^(1/(1+x)))`, the objective minimized by [`ci_bayes`].
pub fn ci_objective(params: &SystemParams, p_false_alarm: f64) -> f64 {
    params.pi0() * p_false_alarm + params.pi1() * (1.0 - p_false_alarm.powf(roc_exponent(params)))
}

/// Minimum error probability of the envelope detector.
///
/// The objective is convex in `P_F`; its stationary point is
/// `P_F* = (pi1 c / pi0)^(1/(1-c))` with `c = 1/(1+x)`, clipped to `[0, 1]`.
/// The threshold field carries `P_F*`.
pub fn ci_bayes(params: &SystemParams) -> BayesResult {
    let (pi0, pi1) = (params.pi0(), params.pi1());
    let x = params.derived_x();
    let c = roc_exponent(params);
    let pf = if pi1 == 0.0 {
        0.0
    } else if pi0 == 0.0 {
        1.0
    } else if x == 0.0 {
        // linear objective: either endpoint
        if pi0 >= pi1 {
            0.0
        } else {
            1.0
        }
    } else if pi1 * c >= pi0 {
        1.0
    } else {
        // (1 + x) / x = 1 / (1 - c)
        ((pi1 * c / pi0).ln() * (1.0 + x) / x).exp()
    };
    let pd = pf.powf(c);
    BayesResult::new(Threshold::FalseAlarm(pf), pf, pd, pi0)
}

/// Leading term `pi1 ln(x) / x` of the large-x expansion of [`ci_bayes`].
pub fn ci_bayes_asymptotic(params: &SystemParams) -> Result<f64> {
    let x = params.derived_x();
    if x <= 1.0 {
        return Err(Error::AsymptoticsInvalid { x });
    }
    Ok(params.pi1() * x.ln() / x)
}

/// `y / (1 + y)^2` with `y = x / 2`.
pub fn ci_snr(params: &SystemParams) -> f64 {
    let y = params.derived_x() / 2.0;
    y / ((1.0 + y) * (1.0 + y))
}
