//! Acceptance suite: one PASS/FAIL line per criterion, with runtimes.
//! Exits non-zero when any criterion fails.

use std::f64::consts::FRAC_PI_4;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qi_fading::analytic::{
    ci_bayes, ci_snr, opa_default_gain, opa_snr_fading, opa_snr_known, sfg_bayes, sfg_bayes_limit, sfg_error,
    sfg_mean_counts, sfg_roc,
};
use qi_fading::montecarlo::{
    bose_einstein_chi_square, estimate_bayes_error, estimate_operating_point, simulate_sfg_counts,
};
use qi_fading::oracle::{
    auto_dim, conditional_state, covariance_from_state, helstrom, lemma1_check, lemma2_trend, lemma2_trend_with,
    qcb_vanishes_at_origin, thermal_state, Lemma2Config, Truncation,
};
use qi_fading::{
    CovarianceMatrix, Experiment, FadingModel, FadingSample, Hypothesis, McConfig, Preset, Receiver, SystemParams,
    Threshold,
};

type Criterion = (&'static str, Duration, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn desk() -> SystemParams {
    SystemParams::new(1.0, 0.1, 0.3, 0.5, 0.01, 0.5).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn preset_roc_dominance() -> Outcome {
    let cases = [(Preset::Fig2a, 2.30e-4, 0.9400), (Preset::Fig2b, 2.25e-2, 0.9400)];
    let mut notes = Vec::new();
    let mut ok = true;
    for (preset, pf_ref, pd_ref) in cases {
        let p = preset.params();
        let curve = sfg_roc(&p);
        let x = p.derived_x();
        let ci = |pf: f64| pf.powf(1.0 / (1.0 + x));
        let zero = sfg_bayes(&p);
        let vertex_ok = zero.threshold == Threshold::Count(0)
            && rel(zero.p_false_alarm, pf_ref) < 1e-3
            && rel(zero.p_detect, pd_ref) < 1e-3;
        // vertex grid plus a dense log grid from the smallest stored vertex to 1e-2
        let lo = curve.vertices().map(|v| v.p_false_alarm).fold(f64::INFINITY, f64::min);
        let mut grid: Vec<f64> = curve
            .vertices()
            .map(|v| v.p_false_alarm)
            .filter(|&f| f <= 1e-2)
            .collect();
        let (a, b) = (lo.log10(), -2.0);
        grid.extend((0..=2000).map(|i| 10f64.powf(a + (b - a) * i as f64 / 2000.0)));
        let margin = grid
            .iter()
            .map(|&f| curve.p_detect_at(f) - ci(f))
            .fold(f64::INFINITY, f64::min);
        ok &= vertex_ok && margin > 0.0;
        notes.push(format!(
            "{}: vertex ({:.4e}, {:.5}) min P_D gap {:.3e} on [{:.1e}, 1e-2]",
            preset.name(),
            zero.p_false_alarm,
            zero.p_detect,
            margin,
            lo
        ));
    }
    outcome(ok, notes.join("; "))
}

fn log_advantage() -> Outcome {
    let base = Preset::Fig2a.params();
    let mut ok = true;
    let mut notes = Vec::new();
    for x in [1e2, 1e3, 1e4] {
        let m = x * base.n_b() / (base.kappa_bar() * base.n_s());
        let p = base.with_m(m).unwrap();
        let ratio = ci_bayes(&p).p_error / sfg_bayes_limit(&p);
        let dev = rel(ratio, x.ln());
        ok &= dev < 0.25;
        notes.push(format!(
            "x={x:.0e}: ratio {ratio:.4} vs ln x {:.4} ({:.1}%)",
            x.ln(),
            100.0 * dev
        ));
    }
    outcome(ok, notes.join("; "))
}

fn opa_collapse() -> Outcome {
    let p = Preset::Fig2a.params();
    let fading = opa_snr_fading(&p, &opa_default_gain(&p));
    let known = opa_snr_known(&p, p.kappa_bar()).unwrap();
    let a = fading / ci_snr(&p);
    let b = known / fading;
    outcome(
        a < 1e-8 && b > 1e10,
        format!("opa/ci = {a:.3e} (< 1e-8), known/opa = {b:.3e} (> 1e10)"),
    )
}

fn oracle_weld() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let n1: f64 = rng.random_range(0.05..5.0);
        let n0: f64 = rng.random_range(0.0..n1);
        let dim = auto_dim(n1, 1e-12);
        let t = Truncation::new(dim, 1e-12);
        let oracle = helstrom(&thermal_state(n0, t).unwrap(), &thermal_state(n1, t).unwrap(), 0.5).unwrap();
        let analytic = sfg_error(n0, n1, 0.5).p_error;
        worst = worst.max((oracle - analytic).abs());
    }
    outcome(
        worst < 1e-8,
        format!("max |helstrom - sfg_error| = {worst:.3e} over 20 pairs"),
    )
}

fn covariance_consistency() -> Outcome {
    let (n_s, kappa, phi, n_b) = (0.1f64, 0.3f64, FRAC_PI_4, 0.5);
    let sample = FadingSample {
        amplitude: kappa.sqrt(),
        phase: phi,
    };
    let mut worst = 0.0f64;
    for h in Hypothesis::BOTH {
        let rho = conditional_state(h, n_s, n_b, sample, Truncation::new(24, 1e-6)).unwrap();
        let m = covariance_from_state(&rho).unwrap();
        let e = CovarianceMatrix::exact(h, n_s, n_b, kappa, phi).unwrap();
        worst = worst.max((m.covariance - e.matrix).abs().max());
    }
    outcome(
        worst < 1e-6,
        format!("max entry error {worst:.3e} (dim 24, both hypotheses)"),
    )
}

fn lemma1() -> Outcome {
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for dim in 2..=4 {
        let r = lemma1_check(1000, dim, 4, 100 + dim as u64).unwrap();
        violations += r.violations;
        min_slack = min_slack.min(r.min_slack);
    }
    outcome(
        violations == 0 && min_slack >= -1e-9,
        format!("3 x 1000 trials (dim 2..4): {violations} violations, min slack {min_slack:.3e}"),
    )
}

fn lemma2() -> Outcome {
    let p = desk();
    let copies = [1, 2, 3];
    let fading = lemma2_trend(&p, &copies, 4, 16).unwrap();
    let decreasing = fading.windows(2).all(|w| w[1].exponent < w[0].exponent);
    let contrast = lemma2_trend_with(
        &p,
        &FadingModel::deterministic(0.5, 0.0).unwrap(),
        &copies,
        &Lemma2Config::new(4, 16),
    )
    .unwrap();
    let ex: Vec<f64> = contrast.iter().map(|t| t.exponent).collect();
    let hi = ex.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = ex.iter().cloned().fold(f64::INFINITY, f64::min);
    let variation = (hi - lo) / hi;
    let origin = qcb_vanishes_at_origin(&p, 4).unwrap();
    let fe: Vec<String> = fading.iter().map(|t| format!("{:.4}", t.exponent)).collect();
    let ce: Vec<String> = ex.iter().map(|e| format!("{e:.4}")).collect();
    outcome(
        decreasing && variation < 0.10 && origin.abs() < 1e-8,
        format!(
            "fading exponents [{}] decreasing={decreasing}; deterministic [{}] variation {:.1}% (< 10%: {}); qcb(0) = {origin:.2e}",
            fe.join(", "),
            ce.join(", "),
            100.0 * variation,
            variation < 0.10
        ),
    )
}

fn monte_carlo() -> Outcome {
    let mc = McConfig::new(100_000, 2024).unwrap();
    let mut ok = true;
    let mut misses = Vec::new();
    for preset in [Preset::Fig2a, Preset::Fig2b] {
        let e = Experiment::rayleigh(preset.params());
        let p = &e.params;
        for (receiver, a) in [(Receiver::Sfg, sfg_bayes(p)), (Receiver::Ci, ci_bayes(p))] {
            let op = estimate_operating_point(receiver, &e, a.threshold, &mc).unwrap();
            let pe = estimate_bayes_error(receiver, &e, &mc).unwrap();
            for (name, est, truth) in [
                ("P_F", op.p_false_alarm, a.p_false_alarm),
                ("P_D", op.p_detect, a.p_detect),
                ("Pr(e)", pe, a.p_error),
            ] {
                if !est.covers(truth) {
                    ok = false;
                    misses.push(format!(
                        "{} {} {name}: {truth:.6} outside [{:.6}, {:.6}]",
                        preset.name(),
                        receiver.name(),
                        est.ci_low,
                        est.ci_high
                    ));
                }
            }
        }
        let counts = simulate_sfg_counts(&e, Hypothesis::Present, &mc);
        let chi = bose_einstein_chi_square(&counts, sfg_mean_counts(p).n1).unwrap();
        if chi.p_value < 0.01 {
            ok = false;
            misses.push(format!("{} chi-square p = {:.4}", preset.name(), chi.p_value));
        } else {
            misses.push(format!("{} chi-square p = {:.3}", preset.name(), chi.p_value));
        }
    }
    outcome(ok, format!("12 Wilson intervals at 1e5 trials; {}", misses.join("; ")))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qi-fading"))
            .args(["bayes-sweep", "--preset", "fig3a", "--seed", "11"])
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let ok = a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    outcome(
        ok,
        format!("{} bytes, identical = {}", a.stdout.len(), a.stdout == b.stdout),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "1 SFG over CI ROC dominance",
            Duration::from_secs(1),
            preset_roc_dominance,
        ),
        (
            "2 ln(x) advantage of SFG over CI",
            Duration::from_secs(1),
            log_advantage,
        ),
        ("3 OPA collapse under fading", Duration::from_secs(1), opa_collapse),
        (
            "4 oracle weld: thermal Helstrom = SFG test",
            Duration::from_secs(30),
            oracle_weld,
        ),
        (
            "5 channel moments = covariance matrix",
            Duration::from_secs(60),
            covariance_consistency,
        ),
        ("6 Helstrom concavity", Duration::from_secs(60), lemma1),
        ("7 fading exponent trend", Duration::from_secs(600), lemma2),
        ("8 Monte Carlo coverage", Duration::from_secs(120), monte_carlo),
        ("9 bayes-sweep determinism", Duration::from_secs(5), determinism),
    ];
    let mut failed = 0;
    for (name, budget, f) in criteria {
        let start = Instant::now();
        let o = f();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= budget;
        let pass = o.passed && in_budget;
        if !pass {
            failed += 1;
        }
        println!(
            "{} [{name}] {:.2}s (budget {}s{}) :: {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs(),
            if in_budget { "" } else { ", exceeded" },
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
