pub mod bayes;
pub mod oracle;
pub mod roc;
pub mod snr;
pub mod validate;

use qi_fading::params::ConfigError;
use qi_fading::{Experiment, Preset};

use crate::args::{Common, ReceiverTag};
use crate::error::{CliError, CliResult};

/// Experiment from `--config`, `--preset`, or `fallback`.
pub fn resolve_experiment(common: &Common, fallback: Preset) -> CliResult<Experiment> {
    if let Some(path) = &common.config {
        return Experiment::from_path(path).map_err(|e| match e {
            ConfigError::Io(message) => CliError::Io {
                path: path.clone(),
                message,
            },
            ConfigError::Parse(message) => CliError::invalid("config", message),
            ConfigError::Invalid(e) => e.into(),
        });
    }
    Ok(Experiment::rayleigh(common.preset.unwrap_or(fallback).params()))
}

/// Requested receivers, deduplicated and in canonical order.
pub fn receivers(common: &Common) -> Vec<ReceiverTag> {
    let mut list = common
        .receivers
        .clone()
        .unwrap_or_else(|| vec![ReceiverTag::Sfg, ReceiverTag::Ci]);
    list.sort();
    list.dedup();
    list
}
