//! Sum-frequency-generation receiver: under Rayleigh fading the total
//! photon count is Bose-Einstein with mean N0 (absent) or N1 (present).

use serde::Serialize;

use super::roc::{Interpolation, PointKind, RocCurve, RocPoint};
use super::{BayesResult, Threshold};
use crate::error::{invalid, Error, Result};
use crate::params::SystemParams;

/// Vertices are generated until the false-alarm probability drops below this.
const P_F_FLOOR: f64 = 1e-15;
const MAX_VERTICES: u64 = 100_000;

/// Mean total photon counts under each hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SfgMeans {
    pub n0: f64,
    pub n1: f64,
}

/// `N0 = -N_S ln(eps) / 2`, `N1 = (1 - eps) M kappa_bar N_S / N_B`.
pub fn sfg_mean_counts(params: &SystemParams) -> SfgMeans {
    SfgMeans {
        n0: -params.n_s() * params.epsilon().ln() / 2.0,
        n1: (1.0 - params.epsilon()) * params.derived_x(),
    }
}

/// `ln(N / (N + 1))`, the per-count log weight of a Bose-Einstein law.
fn log_ratio(n: f64) -> f64 {
    if n == 0.0 {
        f64::NEG_INFINITY
    } else {
        n.ln() - n.ln_1p()
    }
}

/// Likelihood-ratio threshold of the photon-count test.
///
/// Returns `Some(n_t)` for the unique count with
/// `pi0 p0(n_t) >= pi1 p1(n_t)` and `pi0 p0(n_t+1) < pi1 p1(n_t+1)`
/// (so "present" iff `n > n_t`), or `None` when even a zero count already
/// favours "present".
pub fn sfg_threshold(n0: f64, n1: f64, pi0: f64) -> Result<Option<u64>> {
    if !(n0 >= 0.0 && n0.is_finite()) {
        return Err(invalid("N0", format!("must be a finite mean >= 0, got {n0}")));
    }
    if n1.is_nan() || n1 <= n0 {
        return Err(Error::DegenerateDiscrimination { n0, n1 });
    }
    if !(pi0 > 0.0 && pi0 < 1.0) {
        return Err(invalid("pi0", format!("threshold needs 0 < pi0 < 1, got {pi0}")));
    }
    // log[pi1 p1(n)] - log[pi0 p0(n)] = intercept + n * slope, slope > 0
    let intercept = (1.0 - pi0).ln() - pi0.ln() - n1.ln_1p() + n0.ln_1p();
    let slope = log_ratio(n1) - log_ratio(n0);
    let llr = |n: u64| intercept + n as f64 * slope;

    if llr(0) > 0.0 {
        return Ok(None);
    }
    if slope.is_infinite() {
        return Ok(Some(0));
    }
    let mut n_t = (-intercept / slope).floor().max(0.0) as u64;
    while n_t > 0 && llr(n_t) > 0.0 {
        n_t -= 1;
    }
    while llr(n_t + 1) <= 0.0 {
        n_t += 1;
    }
    Ok(Some(n_t))
}

/// `(P_F, P_D) = ([N0/(N0+1)]^(n_t+1), [N1/(N1+1)]^(n_t+1))`.
pub fn sfg_vertex(n0: f64, n1: f64, n_t: u64) -> (f64, f64) {
    let k = n_t as f64 + 1.0;
    ((k * log_ratio(n0)).exp(), (k * log_ratio(n1)).exp())
}

/// Bayes-optimal photon-count test for thermal states of means `n0`, `n1`.
///
/// Degenerate inputs (`n1 <= n0`) fall back to the prior-only decision.
pub fn sfg_error(n0: f64, n1: f64, pi0: f64) -> BayesResult {
    if pi0 <= 0.0 {
        return BayesResult::new(Threshold::AlwaysPresent, 1.0, 1.0, pi0);
    }
    if pi0 >= 1.0 {
        return BayesResult::new(Threshold::NeverPresent, 0.0, 0.0, pi0);
    }
    match sfg_threshold(n0, n1, pi0) {
        Ok(Some(n_t)) => {
            let (pf, pd) = sfg_vertex(n0, n1, n_t);
            BayesResult::new(Threshold::Count(n_t), pf, pd, pi0)
        }
        Ok(None) => BayesResult::new(Threshold::AlwaysPresent, 1.0, 1.0, pi0),
        Err(_) => BayesResult::prior_only(pi0),
    }
}

/// Error probability of the SFG receiver at the given parameters.
pub fn sfg_bayes(params: &SystemParams) -> BayesResult {
    let SfgMeans { n0, n1 } = sfg_mean_counts(params);
    sfg_error(n0, n1, params.pi0())
}

/// Low-brightness limit `pi1 / (1 + x)`.
pub fn sfg_bayes_limit(params: &SystemParams) -> f64 {
    params.pi1() / (1.0 + params.derived_x())
}

pub fn sfg_roc(params: &SystemParams) -> RocCurve {
    let SfgMeans { n0, n1 } = sfg_mean_counts(params);
    sfg_roc_from_means(n0, n1)
}

/// Neyman-Pearson ROC of the count test: integer-threshold vertices joined
/// by randomized segments, from (0, 0) to (1, 1).
pub fn sfg_roc_from_means(n0: f64, n1: f64) -> RocCurve {
    let origin = RocPoint {
        p_false_alarm: 0.0,
        p_detect: 0.0,
        kind: PointKind::Endpoint,
    };
    let corner = RocPoint {
        p_false_alarm: 1.0,
        p_detect: 1.0,
        kind: PointKind::Endpoint,
    };
    if n1.is_nan() || n1 <= n0 {
        return RocCurve::from_sorted(vec![origin, corner], Interpolation::RandomizedSegments);
    }
    let mut vertices = Vec::new();
    for n_t in 0..MAX_VERTICES {
        let (pf, pd) = sfg_vertex(n0, n1, n_t);
        if let Some(prev) = vertices.last() {
            let prev: &RocPoint = prev;
            if pf >= prev.p_false_alarm {
                break;
            }
        }
        vertices.push(RocPoint {
            p_false_alarm: pf,
            p_detect: pd,
            kind: PointKind::Vertex,
        });
        if pf < P_F_FLOOR {
            break;
        }
    }
    vertices.reverse();
    let mut points = Vec::with_capacity(vertices.len() + 2);
    if vertices[0].p_false_alarm > 0.0 {
        points.push(origin);
    }
    points.extend(vertices);
    points.push(corner);
    RocCurve::from_sorted(points, Interpolation::RandomizedSegments)
}
