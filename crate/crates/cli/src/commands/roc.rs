//! `roc`: operating characteristics of the SFG and CI receivers.

use qi_fading::analytic::{ci_roc_on_grid, sfg_roc, PointKind, RocPoint};
use qi_fading::Preset;

use super::{receivers, resolve_experiment};
use crate::args::{Common, ReceiverTag};
use crate::error::{CliError, CliResult};
use crate::output::{emit, sci, CurveRecord, Table};

pub const HEADER: [&str; 4] = ["receiver", "p_false_alarm", "p_detect", "point_kind"];

fn kind_name(kind: PointKind) -> &'static str {
    match kind {
        PointKind::Vertex => "vertex",
        PointKind::Segment => "segment",
        PointKind::Sample => "sample",
        PointKind::Endpoint => "endpoint",
    }
}

/// Points of each requested receiver's curve.
pub fn curves(
    params: &qi_fading::SystemParams,
    receivers: &[ReceiverTag],
    points: usize,
    segment_points: usize,
    pf_min: f64,
) -> CliResult<Vec<(ReceiverTag, Vec<RocPoint>)>> {
    if points < 2 {
        return Err(CliError::invalid("points", "need at least 2 CI samples"));
    }
    if !(pf_min > 0.0 && pf_min < 1.0) {
        return Err(CliError::invalid("pf_min", format!("must lie in (0, 1), got {pf_min}")));
    }
    Ok(receivers
        .iter()
        .map(|&r| {
            let pts = match r {
                ReceiverTag::Sfg => sfg_roc(params).materialize(segment_points),
                ReceiverTag::Ci => ci_roc_on_grid(params, pf_min, points).points().to_vec(),
            };
            (r, pts)
        })
        .collect())
}

pub fn run(common: &Common, points: usize, segment_points: usize, pf_min: Option<f64>) -> CliResult<()> {
    let fallback = Preset::Fig2a;
    let experiment = resolve_experiment(common, fallback)?;
    let pf_min = pf_min.unwrap_or(common.preset.unwrap_or(fallback).p_false_alarm_floor());
    let curves = curves(&experiment.params, &receivers(common), points, segment_points, pf_min)?;

    let mut table = Table::new(HEADER.to_vec());
    let mut records = Vec::new();
    for (r, pts) in &curves {
        for p in pts {
            table.push(vec![
                r.name().to_string(),
                sci(p.p_false_alarm),
                sci(p.p_detect),
                kind_name(p.kind).to_string(),
            ]);
            records.push(
                CurveRecord::new(r.name(), &[("p_false_alarm", p.p_false_alarm)], "p_detect", p.p_detect)
                    .with_label(kind_name(p.kind)),
            );
        }
    }
    emit(common.format, &table, &records, common.out.as_deref())
}
