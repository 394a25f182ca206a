//! `validate`: analytic, oracle and Monte Carlo cross-checks at desk scale.

use std::f64::consts::FRAC_PI_4;

use clap::ValueEnum;
use serde::Serialize;

use qi_fading::analytic::{ci_bayes, ci_roc, sfg_bayes, sfg_error, sfg_mean_counts, sfg_roc, SfgMeans};
use qi_fading::montecarlo::{bose_einstein_chi_square, estimate_operating_point, simulate_sfg_counts, Z_999};
use qi_fading::oracle::{
    auto_dim, conditional_qcb, conditional_state, covariance_from_state, helstrom, lemma1_check,
    qcb_vanishes_at_origin, thermal_state, Truncation, DESK_DEFICIT_TOL, LEMMA1_SLACK_TOL,
};
use qi_fading::{
    BayesResult, CovarianceMatrix, Experiment, FadingSample, Hypothesis, McConfig, McEstimate, Preset, Receiver,
    SystemParams, Threshold,
};

use super::resolve_experiment;
use crate::args::Common;
use crate::error::{CliError, CliResult};
use crate::output::{open_output, write_json};

pub const DEFAULT_TRIALS: u64 = 10_000;
pub const WELD_TOL: f64 = 1e-8;
pub const WELD_DEFICIT_TOL: f64 = 1e-12;
pub const COVARIANCE_TOL: f64 = 1e-6;
pub const COVARIANCE_DIM: usize = 24;
pub const QCB_ORIGIN_TOL: f64 = 1e-8;
pub const CHI_SQUARE_LEVEL: f64 = 0.01;
/// Normal quantile of the 99.9% Wilson coverage intervals.
pub const COVERAGE_Z: f64 = Z_999;
const LEMMA1_MIXTURE: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CheckGroup {
    Analytic,
    Weld,
    Covariance,
    Lemma1,
    Qcb,
    Montecarlo,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 6] = [
        CheckGroup::Analytic,
        CheckGroup::Weld,
        CheckGroup::Covariance,
        CheckGroup::Lemma1,
        CheckGroup::Qcb,
        CheckGroup::Montecarlo,
    ];
}

/// Deliberate model errors for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Drops the factor 1/2 from the absent-hypothesis SFG mean.
    WrongN0,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub group: CheckGroup,
    pub measured: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(group: CheckGroup, name: impl Into<String>, measured: f64, tolerance: f64, passed: bool) -> Self {
        Self {
            name: name.into(),
            group,
            measured,
            expected: None,
            tolerance,
            passed,
            detail: None,
        }
    }

    /// Passes when `measured <= tolerance`.
    fn at_most(group: CheckGroup, name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(group, name, measured, tolerance, measured <= tolerance)
    }

    fn expect(mut self, v: f64) -> Self {
        self.expected = Some(v);
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub params: SystemParams,
    pub seed: u64,
    pub trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<Fault>,
    pub passed: bool,
    pub failed: usize,
    pub checks: Vec<Check>,
}

/// Options for one validation run.
#[derive(Debug, Clone)]
pub struct ValidateOptions {
    pub trials: u64,
    pub seed: u64,
    pub groups: Vec<CheckGroup>,
    pub fault: Option<Fault>,
}

/// Parameters of the truncated-Fock checks: small enough that dim 4-24
/// truncations are accurate.
pub fn desk_params() -> SystemParams {
    SystemParams::new(1.0, 0.1, 0.3, 0.5, 0.01, 0.5).expect("desk parameters are valid")
}

fn analytic_means(params: &SystemParams, fault: Option<Fault>) -> SfgMeans {
    let means = sfg_mean_counts(params);
    match fault {
        Some(Fault::WrongN0) => SfgMeans {
            n0: 2.0 * means.n0,
            ..means
        },
        None => means,
    }
}

fn analytic_checks(params: &SystemParams) -> Vec<Check> {
    let g = CheckGroup::Analytic;
    let mut out = Vec::new();
    for (name, curve) in [("sfg_roc_valid", sfg_roc(params)), ("ci_roc_valid", ci_roc(params))] {
        let c = match curve.check() {
            Ok(()) => Check::new(g, name, 0.0, 0.0, true),
            Err(e) => Check::new(g, name, 1.0, 0.0, false).detail(e),
        };
        out.push(c);
    }
    let sfg = sfg_roc(params);
    let x = params.derived_x();
    let gap = (0..=80)
        .map(|i| {
            let pf = 10f64.powf(-6.0 + 4.0 * i as f64 / 80.0);
            sfg.p_detect_at(pf) - pf.powf(1.0 / (1.0 + x))
        })
        .fold(f64::INFINITY, f64::min);
    out.push(
        Check::new(g, "sfg_dominates_ci_below_1e-2", gap, 0.0, gap > 0.0)
            .detail("minimum of P_D(SFG) - P_D(CI) over P_F in [1e-6, 1e-2]"),
    );
    out
}

/// Helstrom error of two thermal states against the SFG count test.
fn weld_checks(params: &SystemParams, fault: Option<Fault>) -> CliResult<Vec<Check>> {
    let g = CheckGroup::Weld;
    let mut pairs = vec![(0.1, 1.0), (0.5, 2.0), (1e-3, 5.0), (2.0, 4.5)];
    let truth = sfg_mean_counts(params);
    if truth.n1 > truth.n0 {
        pairs.insert(0, (truth.n0, truth.n1));
    }
    let mut out = Vec::new();
    for (i, &(n0, n1)) in pairs.iter().enumerate() {
        let dim = auto_dim(n0.max(n1), WELD_DEFICIT_TOL);
        let trunc = Truncation::new(dim, WELD_DEFICIT_TOL);
        let oracle = helstrom(&thermal_state(n0, trunc)?, &thermal_state(n1, trunc)?, params.pi0())?;
        let analytic_n0 = if i == 0 && truth.n1 > truth.n0 {
            analytic_means(params, fault).n0
        } else {
            n0
        };
        let analytic = sfg_error(analytic_n0, n1, params.pi0()).p_error;
        out.push(
            Check::at_most(g, format!("thermal_weld[{i}]"), (oracle - analytic).abs(), WELD_TOL)
                .expect(oracle)
                .detail(format!("N0 = {n0:e}, N1 = {n1:e}, dim {dim}")),
        );
    }
    Ok(out)
}

fn covariance_checks() -> CliResult<Vec<Check>> {
    let (n_s, kappa, phi, n_b): (f64, f64, f64, f64) = (0.1, 0.3, FRAC_PI_4, 0.5);
    let sample = FadingSample {
        amplitude: kappa.sqrt(),
        phase: phi,
    };
    let mut out = Vec::new();
    for h in Hypothesis::BOTH {
        let rho = conditional_state(h, n_s, n_b, sample, Truncation::new(COVARIANCE_DIM, 1e-6))?;
        let moments = covariance_from_state(&rho)?;
        let expected = CovarianceMatrix::exact(h, n_s, n_b, kappa, phi)?;
        let diff = (moments.covariance - expected.matrix).abs().max();
        let name = match h {
            Hypothesis::Absent => "covariance_absent",
            Hypothesis::Present => "covariance_present",
        };
        out.push(Check::at_most(CheckGroup::Covariance, name, diff, COVARIANCE_TOL));
    }
    Ok(out)
}

fn lemma1_checks(trials: u64, seed: u64) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for dim in 2..=4 {
        let r = lemma1_check(trials as usize, dim, LEMMA1_MIXTURE, seed.wrapping_add(dim as u64))?;
        out.push(
            Check::new(
                CheckGroup::Lemma1,
                format!("lemma1_min_slack_dim{dim}"),
                r.min_slack,
                LEMMA1_SLACK_TOL,
                r.violations == 0 && r.min_slack >= -LEMMA1_SLACK_TOL,
            )
            .detail(format!(
                "{} trials, mixture size {}, {} violations, mean slack {:e}",
                r.trials, r.mixture_size, r.violations, r.mean_slack
            )),
        );
    }
    Ok(out)
}

fn qcb_checks() -> CliResult<Vec<Check>> {
    let g = CheckGroup::Qcb;
    let p = desk_params();
    let mut worst = f64::NEG_INFINITY;
    for &amp in &[0.3, 0.6, 0.9] {
        for &phase in &[0.0, 1.0, 2.5] {
            let r = conditional_qcb(&p, amp, phase, Truncation::new(5, DESK_DEFICIT_TOL))?;
            worst = worst.max(r.helstrom_error - 0.5 * (-r.qcb_exponent).exp());
        }
    }
    let origin = qcb_vanishes_at_origin(&p, 4)?;
    Ok(vec![
        Check::at_most(g, "helstrom_below_chernoff_bound", worst, 1e-10)
            .detail("max of P_err - exp(-qcb)/2 over 9 conditional pairs"),
        Check::at_most(g, "qcb_vanishes_at_origin", origin.abs(), QCB_ORIGIN_TOL),
    ])
}

fn coverage(name: String, est: McEstimate, truth: f64) -> Check {
    Check::new(
        CheckGroup::Montecarlo,
        name,
        est.value,
        0.5 * (est.ci_high - est.ci_low),
        est.covers(truth),
    )
    .expect(truth)
    .detail(format!("99.9% interval [{:e}, {:e}]", est.ci_low, est.ci_high))
}

fn montecarlo_checks(experiment: &Experiment, trials: u64, seed: u64) -> CliResult<Vec<Check>> {
    let mc = McConfig::new(trials, seed)?;
    let params = &experiment.params;
    let mut out = Vec::new();
    let rules: [(Receiver, BayesResult); 2] = [(Receiver::Sfg, sfg_bayes(params)), (Receiver::Ci, ci_bayes(params))];
    for (receiver, analytic) in rules {
        let rule = match analytic.threshold {
            Threshold::FalseAlarm(pf) if pf <= 0.0 => Threshold::NeverPresent,
            t => t,
        };
        let op = estimate_operating_point(receiver, experiment, rule, &mc)?;
        let (f, d) = (op.p_false_alarm.with_z(COVERAGE_Z), op.p_detect.with_z(COVERAGE_Z));
        let (pi0, pi1) = (params.pi0(), params.pi1());
        let pe = McEstimate {
            value: pi0 * f.value + pi1 * (1.0 - d.value),
            ci_low: pi0 * f.ci_low + pi1 * (1.0 - d.ci_high),
            ci_high: pi0 * f.ci_high + pi1 * (1.0 - d.ci_low),
            trials,
        };
        let r = receiver.name();
        out.push(coverage(format!("mc_{r}_p_false_alarm"), f, analytic.p_false_alarm));
        out.push(coverage(format!("mc_{r}_p_detect"), d, analytic.p_detect));
        out.push(coverage(format!("mc_{r}_p_error"), pe, analytic.p_error));
    }
    let n1 = sfg_mean_counts(params).n1;
    if n1 > 0.0 && experiment.fading.is_random() {
        let counts = simulate_sfg_counts(experiment, Hypothesis::Present, &mc);
        let t = bose_einstein_chi_square(&counts, n1)?;
        out.push(
            Check::new(
                CheckGroup::Montecarlo,
                "mc_sfg_present_bose_einstein",
                t.p_value,
                CHI_SQUARE_LEVEL,
                t.p_value >= CHI_SQUARE_LEVEL,
            )
            .detail(format!("chi2 = {:.4} on {} dof", t.statistic, t.degrees_of_freedom)),
        );
    }
    Ok(out)
}

fn guarded(group: CheckGroup, r: CliResult<Vec<Check>>) -> Vec<Check> {
    r.unwrap_or_else(|e| {
        vec![Check::new(group, format!("{group:?}").to_lowercase(), f64::NAN, 0.0, false).detail(e.to_string())]
    })
}

pub fn validate(experiment: &Experiment, opts: &ValidateOptions) -> ValidationReport {
    let mut checks = Vec::new();
    for &g in &opts.groups {
        let params = &experiment.params;
        checks.extend(match g {
            CheckGroup::Analytic => analytic_checks(params),
            CheckGroup::Weld => guarded(g, weld_checks(params, opts.fault)),
            CheckGroup::Covariance => guarded(g, covariance_checks()),
            CheckGroup::Lemma1 => guarded(g, lemma1_checks(opts.trials, opts.seed)),
            CheckGroup::Qcb => guarded(g, qcb_checks()),
            CheckGroup::Montecarlo => guarded(g, montecarlo_checks(experiment, opts.trials, opts.seed)),
        });
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    ValidationReport {
        params: experiment.params,
        seed: opts.seed,
        trials: opts.trials,
        fault: opts.fault,
        passed: failed == 0,
        failed,
        checks,
    }
}

pub fn run(common: &Common, only: Option<&[CheckGroup]>, fault: Option<Fault>) -> CliResult<()> {
    let experiment = resolve_experiment(common, Preset::Fig2a)?;
    let mut groups = only.map_or_else(|| CheckGroup::ALL.to_vec(), <[_]>::to_vec);
    groups.sort();
    groups.dedup();
    let opts = ValidateOptions {
        trials: common.trials.unwrap_or(DEFAULT_TRIALS),
        seed: common.seed,
        groups,
        fault,
    };
    if opts.trials == 0 {
        return Err(CliError::invalid("trials", "must be >= 1"));
    }
    let report = validate(&experiment, &opts);
    write_json(&report, open_output(common.out.as_deref())?)?;
    if report.failed > 0 {
        return Err(CliError::ValidationFailed { failed: report.failed });
    }
    Ok(())
}
