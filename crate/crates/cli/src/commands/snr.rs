//! `snr`: OPA (fading and known target) and CI signal-to-noise ratios.

use qi_fading::analytic::{ci_snr, opa_default_gain, opa_snr_fading, opa_snr_known, OpaConfig};
use qi_fading::{Preset, SystemParams};
use serde::Serialize;

use super::resolve_experiment;
use crate::args::Common;
use crate::error::CliResult;
use crate::output::{emit, sci_opt, CurveRecord, Table};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnrSummary {
    pub opa_snr_fading: f64,
    pub opa_snr_known: f64,
    pub ci_snr: f64,
    /// `None` when the OPA fading SNR is zero.
    pub ci_over_opa_fading: Option<f64>,
    pub opa_known_over_fading: Option<f64>,
}

pub fn summary(params: &SystemParams, gain_minus_one: Option<f64>) -> CliResult<SnrSummary> {
    let opa = match gain_minus_one {
        Some(g) => OpaConfig::new(params, g)?,
        None => opa_default_gain(params),
    };
    let fading = opa_snr_fading(params, &opa);
    let known = opa_snr_known(params, params.kappa_bar())?;
    let ci = ci_snr(params);
    let ratio = |num: f64| (fading > 0.0).then(|| num / fading);
    Ok(SnrSummary {
        opa_snr_fading: fading,
        opa_snr_known: known,
        ci_snr: ci,
        ci_over_opa_fading: ratio(ci),
        opa_known_over_fading: ratio(known),
    })
}

pub fn run(common: &Common, gain_minus_one: Option<f64>) -> CliResult<()> {
    let experiment = resolve_experiment(common, Preset::Fig2a)?;
    let s = summary(&experiment.params, gain_minus_one)?;
    let rows = [
        ("opa", "opa_snr_fading", Some(s.opa_snr_fading)),
        ("opa", "opa_snr_known", Some(s.opa_snr_known)),
        ("ci", "ci_snr", Some(s.ci_snr)),
        ("ratio", "ci_over_opa_fading", s.ci_over_opa_fading),
        ("ratio", "opa_known_over_fading", s.opa_known_over_fading),
    ];
    let mut table = Table::new(vec!["receiver", "metric", "value"]);
    let mut records = Vec::new();
    let x = experiment.params.derived_x();
    for (receiver, metric, value) in rows {
        table.push(vec![receiver.to_string(), metric.to_string(), sci_opt(value)]);
        if let Some(v) = value {
            records.push(CurveRecord::new(receiver, &[("x", x)], metric, v));
        }
    }
    emit(common.format, &table, &records, common.out.as_deref())
}
