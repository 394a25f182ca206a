//! Seeded simulation of SFG photon counts and CI envelope outputs under
//! both hypotheses, with Wilson confidence intervals.
//!
//! Every trial owns an RNG seeded from `(seed, receiver, hypothesis,
//! trial)`, so results do not depend on thread count or scheduling.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::analytic::{ci_bayes, sfg_bayes, sfg_mean_counts, Threshold};
use crate::error::{invalid, Result};
use crate::params::{Experiment, FadingModel, FadingSample, Hypothesis, SystemParams};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;
/// Two-sided 99.9% normal quantile.
pub const Z_999: f64 = 3.290_526_731_491_926;
pub const MIN_TRIALS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Receiver {
    Sfg,
    Ci,
}

impl Receiver {
    pub fn name(self) -> &'static str {
        match self {
            Receiver::Sfg => "sfg",
            Receiver::Ci => "ci",
        }
    }

    fn tag(self) -> u64 {
        match self {
            Receiver::Sfg => 0x5f6,
            Receiver::Ci => 0xc1,
        }
    }
}

/// Whether the `h = 1` SFG count includes the `h = 0` background.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloorModel {
    #[default]
    PaperIdeal,
    WithThermalFloor,
}

/// Sampler for the `h = 0` SFG count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountModel {
    /// `Poisson(N0)`.
    PoissonApprox,
    /// Sum of `M` geometrics of mean `N0 / M`, drawn as a Gamma-Poisson
    /// mixture (exact for any `M`).
    #[default]
    ExactNegativeBinomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub floor_model: FloorModel,
    pub count_model: CountModel,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Result<Self> {
        if trials < MIN_TRIALS {
            return Err(invalid("trials", format!("must be >= {MIN_TRIALS}, got {trials}")));
        }
        Ok(Self {
            trials,
            seed,
            floor_model: FloorModel::default(),
            count_model: CountModel::default(),
        })
    }

    pub fn with_floor_model(self, floor_model: FloorModel) -> Self {
        Self { floor_model, ..self }
    }

    pub fn with_count_model(self, count_model: CountModel) -> Self {
        Self { count_model, ..self }
    }
}

/// Empirical probability with a 95% confidence interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
}

impl McEstimate {
    /// Wilson score interval for `successes` out of `trials`.
    pub fn wilson(successes: u64, trials: u64) -> Self {
        Self::wilson_z(successes, trials, Z_95)
    }

    /// Wilson interval with normal quantile `z`.
    pub fn wilson_z(successes: u64, trials: u64, z: f64) -> Self {
        assert!(trials > 0 && successes <= trials);
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = z * z;
        let denom = 1.0 + z2 / n;
        let centre = (p + z2 / (2.0 * n)) / denom;
        let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        Self {
            value: p,
            ci_low: (centre - half).max(0.0).min(p),
            ci_high: (centre + half).min(1.0).max(p),
            trials,
        }
    }

    /// The same binomial estimate with quantile `z`.
    pub fn with_z(&self, z: f64) -> Self {
        let successes = (self.value * self.trials as f64).round() as u64;
        Self::wilson_z(successes, self.trials, z)
    }

    pub fn covers(&self, x: f64) -> bool {
        self.ci_low <= x && x <= self.ci_high
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatingPointEstimate {
    pub p_false_alarm: McEstimate,
    pub p_detect: McEstimate,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// RNG for one trial; a pure function of its four coordinates.
pub fn trial_rng(seed: u64, receiver: Receiver, hypothesis: Hypothesis, trial: u64) -> ChaCha8Rng {
    let mut h = splitmix64(seed);
    h = splitmix64(h ^ receiver.tag());
    h = splitmix64(h ^ hypothesis.index());
    h = splitmix64(h ^ trial);
    ChaCha8Rng::seed_from_u64(h)
}

/// Inverse-CDF fading draw.
pub fn sample_fading<R: Rng + ?Sized>(model: &FadingModel, rng: &mut R) -> FadingSample {
    if !model.is_random() {
        return model.quantile(0.0, 0.0);
    }
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    model.quantile(u, v)
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("mean is positive and finite").sample(rng) as u64
}

fn background_count<R: Rng + ?Sized>(params: &SystemParams, config: &McConfig, rng: &mut R) -> u64 {
    let n0 = sfg_mean_counts(params).n0;
    if n0 <= 0.0 {
        return 0;
    }
    match config.count_model {
        CountModel::PoissonApprox => poisson(n0, rng),
        CountModel::ExactNegativeBinomial => {
            let m = params.m();
            let rate = Gamma::new(m, n0 / m).expect("shape and scale are positive").sample(rng);
            poisson(rate, rng)
        }
    }
}

/// Total SFG photon count for one trial.
pub fn simulate_sfg_count<R: Rng + ?Sized>(
    params: &SystemParams,
    hypothesis: Hypothesis,
    fading: FadingSample,
    config: &McConfig,
    rng: &mut R,
) -> u64 {
    match hypothesis {
        Hypothesis::Absent => background_count(params, config, rng),
        Hypothesis::Present => {
            let signal = (1.0 - params.epsilon()) * params.m() * fading.kappa() * params.n_s() / params.n_b();
            let floor = match config.floor_model {
                FloorModel::PaperIdeal => 0,
                FloorModel::WithThermalFloor => background_count(params, config, rng),
            };
            poisson(signal, rng) + floor
        }
    }
}

/// Matched-filter envelope `|sqrt(M kappa N_S / N_B) e^{i phi} + n|^2`
/// with `n` circular complex Gaussian of unit variance; `Exp(1)` when the
/// target is absent and `Exp(1 + x)` after averaging over Rayleigh fading.
pub fn simulate_ci_envelope<R: Rng + ?Sized>(
    params: &SystemParams,
    hypothesis: Hypothesis,
    fading: FadingSample,
    rng: &mut R,
) -> f64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    let noise = Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2;
    let signal = match hypothesis {
        Hypothesis::Absent => Complex64::new(0.0, 0.0),
        Hypothesis::Present => Complex64::from_polar(
            (params.m() * fading.kappa() * params.n_s() / params.n_b()).sqrt(),
            fading.phase,
        ),
    };
    (signal + noise).norm_sqr()
}

/// `h`-conditional SFG counts for trials `0..config.trials`, in trial order.
pub fn simulate_sfg_counts(experiment: &Experiment, hypothesis: Hypothesis, config: &McConfig) -> Vec<u64> {
    (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(config.seed, Receiver::Sfg, hypothesis, t);
            let fading = sample_fading(&experiment.fading, &mut rng);
            simulate_sfg_count(&experiment.params, hypothesis, fading, config, &mut rng)
        })
        .collect()
}

/// `h`-conditional CI envelopes for trials `0..config.trials`, in trial order.
pub fn simulate_ci_envelopes(experiment: &Experiment, hypothesis: Hypothesis, config: &McConfig) -> Vec<f64> {
    (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(config.seed, Receiver::Ci, hypothesis, t);
            let fading = sample_fading(&experiment.fading, &mut rng);
            simulate_ci_envelope(&experiment.params, hypothesis, fading, &mut rng)
        })
        .collect()
}

fn count_present(
    experiment: &Experiment,
    receiver: Receiver,
    threshold: Threshold,
    h: Hypothesis,
    config: &McConfig,
) -> u64 {
    match threshold {
        Threshold::AlwaysPresent => return config.trials,
        Threshold::NeverPresent => return 0,
        _ => {}
    }
    (0..config.trials)
        .into_par_iter()
        .filter(|&t| {
            let mut rng = trial_rng(config.seed, receiver, h, t);
            let fading = sample_fading(&experiment.fading, &mut rng);
            match threshold {
                Threshold::Count(n_t) => simulate_sfg_count(&experiment.params, h, fading, config, &mut rng) > n_t,
                Threshold::FalseAlarm(pf) => simulate_ci_envelope(&experiment.params, h, fading, &mut rng) > -pf.ln(),
                _ => unreachable!("constant rules handled above"),
            }
        })
        .count() as u64
}

/// Empirical `(P_F, P_D)` of one decision rule.
///
/// SFG takes [`Threshold::Count`] (present iff count > n_t); CI takes
/// [`Threshold::FalseAlarm`] (present iff `R > -ln P_F`). Both accept the
/// constant rules.
pub fn estimate_operating_point(
    receiver: Receiver,
    experiment: &Experiment,
    threshold: Threshold,
    config: &McConfig,
) -> Result<OperatingPointEstimate> {
    match (receiver, threshold) {
        (_, Threshold::AlwaysPresent | Threshold::NeverPresent) => {}
        (Receiver::Sfg, Threshold::Count(_)) => {}
        (Receiver::Ci, Threshold::FalseAlarm(pf)) if pf > 0.0 && pf <= 1.0 => {}
        _ => {
            return Err(invalid(
                "threshold",
                format!("{threshold:?} is not a valid rule for the {} receiver", receiver.name()),
            ))
        }
    }
    let f = count_present(experiment, receiver, threshold, Hypothesis::Absent, config);
    let d = count_present(experiment, receiver, threshold, Hypothesis::Present, config);
    Ok(OperatingPointEstimate {
        p_false_alarm: McEstimate::wilson(f, config.trials),
        p_detect: McEstimate::wilson(d, config.trials),
    })
}

/// Empirical error probability at the analytic Bayes rule, with the
/// interval built from the component interval endpoints.
pub fn estimate_bayes_error(receiver: Receiver, experiment: &Experiment, config: &McConfig) -> Result<McEstimate> {
    let params = &experiment.params;
    let rule = match receiver {
        Receiver::Sfg => sfg_bayes(params).threshold,
        Receiver::Ci => match ci_bayes(params).threshold {
            Threshold::FalseAlarm(pf) if pf <= 0.0 => Threshold::NeverPresent,
            other => other,
        },
    };
    let op = estimate_operating_point(receiver, experiment, rule, config)?;
    let (pi0, pi1) = (params.pi0(), params.pi1());
    let (f, d) = (op.p_false_alarm, op.p_detect);
    Ok(McEstimate {
        value: pi0 * f.value + pi1 * (1.0 - d.value),
        ci_low: pi0 * f.ci_low + pi1 * (1.0 - d.ci_high),
        ci_high: pi0 * f.ci_high + pi1 * (1.0 - d.ci_low),
        trials: config.trials,
    })
}

/// Pearson goodness-of-fit of counts against `Bose-Einstein(mean)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Bins `0, 1, ..., K-1` and a tail bin `>= K`, with `K` the largest value
/// keeping every expected bin count at least 5.
pub fn bose_einstein_chi_square(counts: &[u64], mean: f64) -> Result<ChiSquareTest> {
    if counts.is_empty() {
        return Err(invalid("counts", "need at least one sample"));
    }
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(invalid("mean", format!("must be positive, got {mean}")));
    }
    let n = counts.len() as f64;
    let ratio = mean / (mean + 1.0);
    let pmf = |k: u64| ratio.powi(k as i32) / (mean + 1.0);
    let mut k_max = 0u64;
    while n * pmf(k_max) >= 5.0 && n * ratio.powi(k_max as i32 + 1) >= 5.0 {
        k_max += 1;
    }
    if k_max == 0 {
        return Err(invalid("counts", "too few samples for a chi-square test"));
    }
    let bins = k_max as usize + 1;
    let mut observed = vec![0u64; bins];
    for &c in counts {
        observed[(c.min(k_max)) as usize] += 1;
    }
    let mut statistic = 0.0;
    for (k, &o) in observed.iter().enumerate() {
        let p = if k as u64 == k_max {
            ratio.powi(k_max as i32)
        } else {
            pmf(k as u64)
        };
        let e = n * p;
        statistic += (o as f64 - e).powi(2) / e;
    }
    let dof = bins - 1;
    let p_value = ChiSquared::new(dof as f64).expect("dof is positive").sf(statistic);
    Ok(ChiSquareTest {
        statistic,
        degrees_of_freedom: dof,
        p_value,
    })
}
