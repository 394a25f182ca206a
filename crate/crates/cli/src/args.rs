use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qi_fading::Preset;

use crate::commands::validate::{CheckGroup, Fault};
use crate::output::Format;
use crate::sweep::LogRange;

pub const DEFAULT_SEED: u64 = 20_241_017;

#[derive(Debug, Parser)]
#[command(
    name = "qi-fading",
    version,
    about = "ROC curves, error probabilities and SNRs for illumination receivers under Rayleigh fading"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Parameter file (TOML, or JSON with a `.json` extension).
    #[arg(long, global = true, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Named parameter set: fig2a, fig2b, fig3a, fig3b.
    #[arg(long, global = true, value_parser = parse_preset)]
    pub preset: Option<Preset>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Monte Carlo / property-check trial count.
    #[arg(long, global = true)]
    pub trials: Option<u64>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Comma-separated receiver list.
    #[arg(long, global = true, value_delimiter = ',')]
    pub receivers: Option<Vec<ReceiverTag>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum ReceiverTag {
    Sfg,
    Ci,
}

impl ReceiverTag {
    pub fn name(self) -> &'static str {
        match self {
            ReceiverTag::Sfg => "sfg",
            ReceiverTag::Ci => "ci",
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// ROC curves of the SFG and CI receivers.
    Roc {
        /// Number of CI samples, log-spaced in P_F.
        #[arg(long, default_value_t = qi_fading::analytic::CI_ROC_POINTS)]
        points: usize,
        /// Interior points emitted on each SFG randomized segment.
        #[arg(long, default_value_t = 0)]
        segment_points: usize,
        /// Lower end of the CI false-alarm grid.
        #[arg(long)]
        pf_min: Option<f64>,
    },
    /// Bayes error probabilities versus log10(M).
    BayesSweep {
        /// Exponent grid START:STOP:POINTS.
        #[arg(long, conflicts_with = "values")]
        range: Option<LogRange>,
        /// Explicit comma-separated log10(M) values.
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
    },
    /// OPA and CI signal-to-noise ratios.
    Snr {
        /// OPA gain minus one; defaults to sqrt(N_S)/N_B.
        #[arg(long)]
        gain_minus_one: Option<f64>,
    },
    /// Cross-checks analytic, oracle and Monte Carlo results; writes a JSON report.
    Validate {
        /// Restrict to these check groups.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<CheckGroup>>,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
    /// Helstrom error and quantum Chernoff exponent of two states read from JSON files.
    Oracle {
        #[arg(long)]
        state0: PathBuf,
        #[arg(long)]
        state1: PathBuf,
        /// Prior of state0.
        #[arg(long, default_value_t = 0.5)]
        pi0: f64,
    },
}

fn parse_preset(s: &str) -> Result<Preset, String> {
    Preset::from_name(s).ok_or_else(|| {
        let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
        format!("unknown preset `{s}` (expected one of {})", names.join(", "))
    })
}
