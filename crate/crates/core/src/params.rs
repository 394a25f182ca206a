//! Experiment configuration: system parameters, fading models and the
//! on-disk config schema.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Scalar knobs of one illumination experiment.
///
/// `m` is a real-valued count (up to ~1e12); [`SystemParams::m_count`]
/// gives the rounded integer view.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    m: f64,
    n_s: f64,
    n_b: f64,
    kappa_bar: f64,
    epsilon: f64,
    pi0: f64,
    pi1: f64,
}

impl SystemParams {
    /// Validates and builds a parameter set. `pi1` is derived as `1 - pi0`.
    ///
    /// `kappa_bar = 0` (no return, x = 0) is accepted.
    pub fn new(m: f64, n_s: f64, n_b: f64, kappa_bar: f64, epsilon: f64, pi0: f64) -> Result<Self> {
        if !(m.is_finite() && m >= 1.0) {
            return Err(invalid("M", format!("must be a finite count >= 1, got {m}")));
        }
        if !(n_s.is_finite() && n_s > 0.0) {
            return Err(invalid("N_S", format!("must be > 0, got {n_s}")));
        }
        if !(n_b.is_finite() && n_b > 0.0) {
            return Err(invalid("N_B", format!("must be > 0, got {n_b}")));
        }
        if !(0.0..=1.0).contains(&kappa_bar) {
            return Err(invalid("kappa_bar", format!("must lie in [0, 1], got {kappa_bar}")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")));
        }
        if !(0.0..=1.0).contains(&pi0) {
            return Err(invalid("pi0", format!("must lie in [0, 1], got {pi0}")));
        }
        Ok(Self {
            m,
            n_s,
            n_b,
            kappa_bar,
            epsilon,
            pi0,
            pi1: 1.0 - pi0,
        })
    }

    /// Number of signal-idler mode pairs.
    pub fn m(&self) -> f64 {
        self.m
    }
    pub fn m_count(&self) -> u64 {
        self.m.round() as u64
    }
    /// Signal brightness (photons per mode).
    pub fn n_s(&self) -> f64 {
        self.n_s
    }
    /// Background brightness (photons per mode).
    pub fn n_b(&self) -> f64 {
        self.n_b
    }
    /// Mean target-return intensity.
    pub fn kappa_bar(&self) -> f64 {
        self.kappa_bar
    }
    /// SFG tap fraction.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
    pub fn pi0(&self) -> f64 {
        self.pi0
    }
    pub fn pi1(&self) -> f64 {
        self.pi1
    }

    pub fn with_m(self, m: f64) -> Result<Self> {
        Self::new(m, self.n_s, self.n_b, self.kappa_bar, self.epsilon, self.pi0)
    }
    pub fn with_n_s(self, n_s: f64) -> Result<Self> {
        Self::new(self.m, n_s, self.n_b, self.kappa_bar, self.epsilon, self.pi0)
    }
    pub fn with_n_b(self, n_b: f64) -> Result<Self> {
        Self::new(self.m, self.n_s, n_b, self.kappa_bar, self.epsilon, self.pi0)
    }
    pub fn with_kappa_bar(self, kappa_bar: f64) -> Result<Self> {
        Self::new(self.m, self.n_s, self.n_b, kappa_bar, self.epsilon, self.pi0)
    }
    pub fn with_pi0(self, pi0: f64) -> Result<Self> {
        Self::new(self.m, self.n_s, self.n_b, self.kappa_bar, self.epsilon, pi0)
    }

    /// `N_S < 0.1`.
    pub fn low_brightness(&self) -> bool {
        self.n_s < 0.1
    }
    /// `N_B > 1`.
    pub fn high_noise(&self) -> bool {
        self.n_b > 1.0
    }

    /// The recurring group `x = M * kappa_bar * N_S / N_B`.
    pub fn derived_x(&self) -> f64 {
        self.m * self.kappa_bar * self.n_s / self.n_b
    }
}

/// Free-function form of [`SystemParams::derived_x`].
pub fn derived_x(params: &SystemParams) -> f64 {
    params.derived_x()
}

/// Target absent (`h = 0`) or present (`h = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    Absent,
    Present,
}

impl Hypothesis {
    pub const BOTH: [Hypothesis; 2] = [Hypothesis::Absent, Hypothesis::Present];

    pub fn index(self) -> u64 {
        match self {
            Hypothesis::Absent => 0,
            Hypothesis::Present => 1,
        }
    }
}

/// Named parameter sets for the standard scenarios
/// (kappa_bar = 0.01, N_B = 20, epsilon = 0.01, equal priors).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig2a, Preset::Fig2b, Preset::Fig3a, Preset::Fig3b];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig3a => "fig3a",
            Preset::Fig3b => "fig3b",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Signal brightness of the preset.
    pub fn n_s(self) -> f64 {
        match self {
            Preset::Fig2a | Preset::Fig3a => 1e-4,
            Preset::Fig2b | Preset::Fig3b => 1e-2,
        }
    }

    /// M used for the ROC presets. Sweep presets return the M of the ROC preset
    /// with the same brightness.
    pub fn m(self) -> f64 {
        match self {
            Preset::Fig2a | Preset::Fig3a => 10f64.powf(8.5),
            Preset::Fig2b | Preset::Fig3b => 10f64.powf(6.5),
        }
    }

    pub fn params(self) -> SystemParams {
        SystemParams::new(self.m(), self.n_s(), 20.0, 0.01, 0.01, 0.5).expect("preset parameters are valid")
    }

    /// Default log10(M) axis for the error-probability sweeps.
    pub fn log10_m_range(self) -> (f64, f64) {
        (5.0, 10.0)
    }

    /// Default lower end of the false-alarm axis for the ROC presets.
    pub fn p_false_alarm_floor(self) -> f64 {
        1e-6
    }
}

/// Distribution of the target return's amplitude `sqrt(kappa)` and phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FadingModel {
    /// Rayleigh amplitude on `[0, inf)`, uniform phase.
    Rayleigh { kappa_bar: f64 },
    /// Rayleigh amplitude truncated to `[0, 1]` (passive target), uniform phase.
    TruncatedRayleigh { kappa_bar: f64 },
    /// Known reflectivity and phase.
    Deterministic { kappa: f64, phi: f64 },
}

/// One draw of (amplitude, phase).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FadingSample {
    /// `sqrt(kappa)`.
    pub amplitude: f64,
    /// Radians in `[0, 2 pi)`.
    pub phase: f64,
}

impl FadingSample {
    pub fn kappa(&self) -> f64 {
        self.amplitude * self.amplitude
    }
}

impl FadingModel {
    pub fn rayleigh(kappa_bar: f64) -> Result<Self> {
        check_kappa_bar(kappa_bar)?;
        Ok(FadingModel::Rayleigh { kappa_bar })
    }

    pub fn truncated_rayleigh(kappa_bar: f64) -> Result<Self> {
        check_kappa_bar(kappa_bar)?;
        Ok(FadingModel::TruncatedRayleigh { kappa_bar })
    }

    pub fn deterministic(kappa: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(invalid("fading.kappa", format!("must lie in [0, 1], got {kappa}")));
        }
        if !phi.is_finite() {
            return Err(invalid("fading.phi", "must be finite"));
        }
        Ok(FadingModel::Deterministic {
            kappa,
            phi: phi.rem_euclid(TAU),
        })
    }

    pub fn is_random(&self) -> bool {
        !matches!(self, FadingModel::Deterministic { .. })
    }

    /// Upper end of the amplitude support, `inf` for plain Rayleigh.
    pub fn amplitude_support(&self) -> f64 {
        match self {
            FadingModel::Rayleigh { .. } => f64::INFINITY,
            FadingModel::TruncatedRayleigh { .. } => 1.0,
            FadingModel::Deterministic { kappa, .. } => kappa.sqrt(),
        }
    }

    /// Mean of `kappa = amplitude^2`.
    pub fn mean_kappa(&self) -> f64 {
        match *self {
            FadingModel::Rayleigh { kappa_bar } => kappa_bar,
            FadingModel::TruncatedRayleigh { kappa_bar } => {
                // mean of Exp(kappa_bar) truncated to [0, 1]
                let tail = (-1.0 / kappa_bar).exp();
                kappa_bar - tail / (1.0 - tail)
            }
            FadingModel::Deterministic { kappa, .. } => kappa,
        }
    }

    /// Amplitude density `f(x)`; zero outside the support.
    pub fn pdf(&self, amplitude: f64) -> Result<f64> {
        match *self {
            FadingModel::Deterministic { .. } => Err(Error::NoDensity),
            _ if amplitude < 0.0 => Ok(0.0),
            FadingModel::Rayleigh { kappa_bar } => {
                Ok(2.0 * amplitude * (-amplitude * amplitude / kappa_bar).exp() / kappa_bar)
            }
            FadingModel::TruncatedRayleigh { kappa_bar } => {
                if amplitude > 1.0 {
                    return Ok(0.0);
                }
                let norm = -(-1.0 / kappa_bar).exp_m1();
                Ok(2.0 * amplitude * (-amplitude * amplitude / kappa_bar).exp() / (kappa_bar * norm))
            }
        }
    }

    /// Phase density: `1 / 2pi` on `[0, 2pi)` for the random kinds.
    pub fn phase_pdf(&self, phase: f64) -> Result<f64> {
        match self {
            FadingModel::Deterministic { .. } => Err(Error::NoDensity),
            _ if (0.0..TAU).contains(&phase) => Ok(1.0 / TAU),
            _ => Ok(0.0),
        }
    }

    /// Maps a pair of uniforms on `[0, 1)` to a fading draw by inverse CDF.
    ///
    /// `kappa = amplitude^2` is exponential with mean `kappa_bar` (or its
    /// `[0, 1]` truncation); the phase is `2 pi u_phase`.
    pub fn quantile(&self, u_amplitude: f64, u_phase: f64) -> FadingSample {
        match *self {
            FadingModel::Deterministic { kappa, phi } => FadingSample {
                amplitude: kappa.sqrt(),
                phase: phi,
            },
            FadingModel::Rayleigh { kappa_bar } => FadingSample {
                amplitude: (-kappa_bar * (-u_amplitude).ln_1p()).sqrt(),
                phase: TAU * u_phase,
            },
            FadingModel::TruncatedRayleigh { kappa_bar } => {
                let mass = -(-1.0 / kappa_bar).exp_m1();
                let kappa = (-kappa_bar * (-u_amplitude * mass).ln_1p()).min(1.0);
                FadingSample {
                    amplitude: kappa.sqrt(),
                    phase: TAU * u_phase,
                }
            }
        }
    }
}

fn check_kappa_bar(kappa_bar: f64) -> Result<()> {
    if kappa_bar > 0.0 && kappa_bar <= 1.0 {
        Ok(())
    } else {
        Err(invalid(
            "kappa_bar",
            format!("fading needs kappa_bar in (0, 1], got {kappa_bar}"),
        ))
    }
}

/// A parameter set together with its fading model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Experiment {
    pub params: SystemParams,
    pub fading: FadingModel,
}

impl Experiment {
    /// Rayleigh fading at the parameters' `kappa_bar`, or a zero-return
    /// deterministic model when `kappa_bar = 0`.
    pub fn rayleigh(params: SystemParams) -> Self {
        let fading = if params.kappa_bar() > 0.0 {
            FadingModel::Rayleigh {
                kappa_bar: params.kappa_bar(),
            }
        } else {
            FadingModel::Deterministic { kappa: 0.0, phi: 0.0 }
        };
        Self { params, fading }
    }

    /// Reads a config file: JSON when the extension is `.json`, TOML
    /// otherwise.
    pub fn from_path(path: &Path) -> std::result::Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(e.to_string()))?;
        let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn from_toml(text: &str) -> std::result::Result<Self, ConfigError> {
        let raw: ConfigFile = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        raw.into_experiment().map_err(ConfigError::Invalid)
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, ConfigError> {
        let raw: ConfigFile = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        raw.into_experiment().map_err(ConfigError::Invalid)
    }
}

/// Failure modes when loading a config file; the CLI maps these to exit codes.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Io(String),
    Parse(String),
    Invalid(Error),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Io(e) => write!(f, "cannot read config: {e}"),
            ConfigError::Parse(e) => write!(f, "cannot parse config: {e}"),
            ConfigError::Invalid(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// On-disk schema. Keys: `M`, `N_S`, `N_B`, `kappa_bar`, `epsilon`
/// (default 0.01), `pi0` (default 0.5), and an optional `fading` table with
/// `kind` (`rayleigh` | `truncated_rayleigh` | `deterministic`) and, for the
/// deterministic kind, `kappa` and `phi`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "N_S")]
    pub n_s: f64,
    #[serde(rename = "N_B")]
    pub n_b: f64,
    pub kappa_bar: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_pi0")]
    pub pi0: f64,
    #[serde(default)]
    pub fading: Option<FadingSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSection {
    pub kind: String,
    pub kappa: Option<f64>,
    pub phi: Option<f64>,
}

fn default_epsilon() -> f64 {
    0.01
}

fn default_pi0() -> f64 {
    0.5
}

impl ConfigFile {
    pub fn into_experiment(self) -> Result<Experiment> {
        let params = SystemParams::new(self.m, self.n_s, self.n_b, self.kappa_bar, self.epsilon, self.pi0)?;
        let Some(section) = self.fading else {
            return Ok(Experiment::rayleigh(params));
        };
        let fading = match section.kind.as_str() {
            "rayleigh" => FadingModel::rayleigh(params.kappa_bar())?,
            "truncated_rayleigh" => FadingModel::truncated_rayleigh(params.kappa_bar())?,
            "deterministic" => {
                let kappa = section
                    .kappa
                    .ok_or_else(|| invalid("fading.kappa", "required for the deterministic kind"))?;
                FadingModel::deterministic(kappa, section.phi.unwrap_or(0.0))?
            }
            other => return Err(invalid("fading.kind", format!("unknown kind `{other}`"))),
        };
        Ok(Experiment { params, fading })
    }
}
