//! Command-line front end for the `qi_fading` models.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod sweep;

pub use args::{Cli, Command, Common, ReceiverTag};
pub use error::{CliError, CliResult};
pub use output::{CurveRecord, Format};
pub use sweep::{Axis, LogRange, SweepSpec};

/// Runs one parsed invocation.
pub fn run(cli: &Cli) -> CliResult<()> {
    let common = &cli.common;
    match &cli.command {
        Command::Roc {
            points,
            segment_points,
            pf_min,
        } => commands::roc::run(common, *points, *segment_points, *pf_min),
        Command::BayesSweep { range, values } => commands::bayes::run(common, *range, values.clone()),
        Command::Snr { gain_minus_one } => commands::snr::run(common, *gain_minus_one),
        Command::Validate { only, inject_fault } => commands::validate::run(common, only.as_deref(), *inject_fault),
        Command::Oracle { state0, state1, pi0 } => commands::oracle::run(common, state0, state1, *pi0),
    }
}
