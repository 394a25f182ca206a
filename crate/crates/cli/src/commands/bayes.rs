//! `bayes-sweep`: minimum error probabilities versus log10(M).

use rayon::prelude::*;
use serde::Serialize;

use qi_fading::analytic::{ci_bayes, ci_bayes_asymptotic, sfg_bayes, sfg_bayes_limit};
use qi_fading::{Preset, Threshold};

use super::{receivers, resolve_experiment};
use crate::args::{Common, ReceiverTag};
use crate::error::CliResult;
use crate::output::{emit, sci, sci_opt, CurveRecord, Table};
use crate::sweep::{Axis, LogRange, SweepSpec, DEFAULT_POINTS};

pub const HEADER: [&str; 9] = [
    "log10_m",
    "m",
    "x",
    "n_t",
    "pe_sfg",
    "pe_sfg_limit",
    "pe_ci",
    "pe_ci_asymptotic",
    "threshold_jump",
];

/// One grid point. `n_t` is `None` when the SFG rule is a constant decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub log10_m: f64,
    pub m: f64,
    pub x: f64,
    pub n_t: Option<u64>,
    pub pe_sfg: Option<f64>,
    pub pe_sfg_limit: Option<f64>,
    pub pe_ci: Option<f64>,
    /// Only defined for `x > 1`.
    pub pe_ci_asymptotic: Option<f64>,
    /// `"<old>-><new>"` where the SFG threshold changes from the previous row.
    pub threshold_jump: Option<String>,
}

fn threshold_label(t: Option<u64>) -> String {
    t.map_or_else(|| "none".to_string(), |n| n.to_string())
}

/// Evaluates the grid in parallel; rows come back sorted by axis value
/// with jump markers filled in.
pub fn sweep_rows(spec: &SweepSpec, receivers: &[ReceiverTag]) -> CliResult<Vec<SweepRow>> {
    let sfg = receivers.contains(&ReceiverTag::Sfg);
    let ci = receivers.contains(&ReceiverTag::Ci);
    let mut rows: Vec<SweepRow> = spec
        .values()
        .par_iter()
        .map(|&v| {
            let p = spec.params_at(v)?;
            let s = sfg_bayes(&p);
            let n_t = match s.threshold {
                Threshold::Count(n) => Some(n),
                _ => None,
            };
            Ok(SweepRow {
                log10_m: v,
                m: p.m(),
                x: p.derived_x(),
                n_t,
                pe_sfg: sfg.then_some(s.p_error),
                pe_sfg_limit: sfg.then(|| sfg_bayes_limit(&p)),
                pe_ci: ci.then(|| ci_bayes(&p).p_error),
                pe_ci_asymptotic: if ci { ci_bayes_asymptotic(&p).ok() } else { None },
                threshold_jump: None,
            })
        })
        .collect::<CliResult<_>>()?;
    rows.sort_by(|a, b| a.log10_m.total_cmp(&b.log10_m));
    for i in 1..rows.len() {
        if rows[i].n_t != rows[i - 1].n_t {
            rows[i].threshold_jump = Some(format!(
                "{}->{}",
                threshold_label(rows[i - 1].n_t),
                threshold_label(rows[i].n_t)
            ));
        }
    }
    Ok(rows)
}

pub fn table(rows: &[SweepRow]) -> Table {
    let mut t = Table::new(HEADER.to_vec());
    for r in rows {
        t.push(vec![
            sci(r.log10_m),
            sci(r.m),
            sci(r.x),
            r.n_t.map(|n| n.to_string()).unwrap_or_default(),
            sci_opt(r.pe_sfg),
            sci_opt(r.pe_sfg_limit),
            sci_opt(r.pe_ci),
            sci_opt(r.pe_ci_asymptotic),
            r.threshold_jump.clone().unwrap_or_default(),
        ]);
    }
    t
}

pub fn records(rows: &[SweepRow]) -> Vec<CurveRecord> {
    let mut out = Vec::new();
    for r in rows {
        let point = [("log10_m", r.log10_m), ("m", r.m), ("x", r.x)];
        let metrics = [
            ("sfg", "pe_sfg", r.pe_sfg),
            ("sfg", "pe_sfg_limit", r.pe_sfg_limit),
            ("ci", "pe_ci", r.pe_ci),
            ("ci", "pe_ci_asymptotic", r.pe_ci_asymptotic),
            ("sfg", "n_t", r.n_t.map(|n| n as f64)),
        ];
        for (receiver, metric, value) in metrics {
            if let Some(v) = value {
                let rec = CurveRecord::new(receiver, &point, metric, v);
                out.push(match (&r.threshold_jump, metric) {
                    (Some(j), "n_t") => rec.with_label(format!("threshold_jump {j}")),
                    _ => rec,
                });
            }
        }
    }
    out
}

pub fn spec_for(common: &Common, range: Option<LogRange>, values: Option<Vec<f64>>) -> CliResult<SweepSpec> {
    let fallback = Preset::Fig3a;
    let experiment = resolve_experiment(common, fallback)?;
    let fixed = experiment.params;
    match (values, range) {
        (Some(v), _) => SweepSpec::new(Axis::Log10M, v, fixed),
        (None, Some(r)) => SweepSpec::from_range(Axis::Log10M, r, fixed),
        (None, None) => {
            let (start, stop) = common.preset.unwrap_or(fallback).log10_m_range();
            SweepSpec::from_range(
                Axis::Log10M,
                LogRange {
                    start,
                    stop,
                    points: DEFAULT_POINTS,
                },
                fixed,
            )
        }
    }
}

pub fn run(common: &Common, range: Option<LogRange>, values: Option<Vec<f64>>) -> CliResult<()> {
    let spec = spec_for(common, range, values)?;
    let rows = sweep_rows(&spec, &receivers(common))?;
    emit(common.format, &table(&rows), &records(&rows), common.out.as_deref())
}
