use qi_fading::analytic::{ci_bayes, sfg_bayes};
use qi_fading::montecarlo::{estimate_bayes_error, estimate_operating_point, sample_fading};
use qi_fading::{Experiment, FadingModel, McConfig, Preset, Receiver};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Kolmogorov-Smirnov distance between sorted samples and a CDF.
fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[test]
fn rayleigh_draws_pass_ks() {
    let kappa_bar = 0.01;
    let model = FadingModel::rayleigh(kappa_bar).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let n = 20_000;
    let draws: Vec<_> = (0..n).map(|_| sample_fading(&model, &mut rng)).collect();
    // 1% critical value 1.628 / sqrt(n)
    let crit = 1.628 / (n as f64).sqrt();
    let d_amp = ks_distance(draws.iter().map(|s| s.amplitude).collect(), |a| {
        1.0 - (-a * a / kappa_bar).exp()
    });
    let d_phase = ks_distance(draws.iter().map(|s| s.phase).collect(), |p| p / std::f64::consts::TAU);
    assert!(d_amp < crit, "{d_amp} >= {crit}");
    assert!(d_phase < crit, "{d_phase} >= {crit}");
}

#[test]
fn truncated_rayleigh_draws_pass_ks() {
    let kappa_bar = 0.5;
    let model = FadingModel::truncated_rayleigh(kappa_bar).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 20_000;
    let amps: Vec<f64> = (0..n).map(|_| sample_fading(&model, &mut rng).amplitude).collect();
    assert!(amps.iter().all(|&a| (0.0..=1.0).contains(&a)));
    let z = 1.0 - (-1.0 / kappa_bar).exp();
    let d = ks_distance(amps, |a| (1.0 - (-a * a / kappa_bar).exp()) / z);
    assert!(d < 1.628 / (n as f64).sqrt(), "{d}");
}

#[test]
fn wilson_coverage_over_repetitions() {
    let e = Experiment::rayleigh(Preset::Fig2b.params());
    let sfg = sfg_bayes(&e.params);
    let ci = ci_bayes(&e.params);
    let mut hits = [0usize; 4];
    for rep in 0..100 {
        let mc = McConfig::new(4_000, 1_000 + rep).unwrap();
        let s = estimate_operating_point(Receiver::Sfg, &e, sfg.threshold, &mc).unwrap();
        let c = estimate_operating_point(Receiver::Ci, &e, ci.threshold, &mc).unwrap();
        hits[0] += s.p_false_alarm.covers(sfg.p_false_alarm) as usize;
        hits[1] += s.p_detect.covers(sfg.p_detect) as usize;
        hits[2] += c.p_false_alarm.covers(ci.p_false_alarm) as usize;
        hits[3] += c.p_detect.covers(ci.p_detect) as usize;
    }
    for h in hits {
        assert!(h >= 93, "{hits:?}");
    }
}

#[test]
fn reseeding_is_bit_identical() {
    let e = Experiment::rayleigh(Preset::Fig2a.params());
    let mc = McConfig::new(5_000, 42).unwrap();
    for r in [Receiver::Sfg, Receiver::Ci] {
        assert_eq!(
            estimate_bayes_error(r, &e, &mc).unwrap(),
            estimate_bayes_error(r, &e, &mc).unwrap()
        );
    }
    let other = McConfig::new(5_000, 43).unwrap();
    assert_ne!(
        estimate_bayes_error(Receiver::Ci, &e, &mc).unwrap(),
        estimate_bayes_error(Receiver::Ci, &e, &other).unwrap()
    );
}
