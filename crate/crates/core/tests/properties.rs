use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qi_fading::analytic::{
    ci_bayes, ci_roc, opa_default_gain, opa_snr_fading, opa_snr_known, sfg_bayes, sfg_bayes_limit, sfg_error, sfg_roc,
    sfg_threshold, sfg_vertex,
};
use qi_fading::oracle::{qcb, random_density_matrix};
use qi_fading::{derived_x, Preset, SystemParams};

fn params() -> impl Strategy<Value = SystemParams> {
    (
        0.0f64..10.0,
        -6.0f64..-1.0,
        -1.0f64..2.0,
        -3.0f64..0.0,
        0.001f64..0.1,
        0.05f64..0.95,
    )
        .prop_map(|(lm, ls, lb, lk, eps, pi0)| {
            SystemParams::new(10f64.powf(lm), 10f64.powf(ls), 10f64.powf(lb), 10f64.powf(lk), eps, pi0).unwrap()
        })
}

proptest! {
    #[test]
    fn derived_x_scales(p in params(), f in 1.0f64..100.0) {
        let x = derived_x(&p);
        prop_assert!((derived_x(&p.with_m(p.m() * f).unwrap()) - f * x).abs() <= 1e-12 * f * x);
        prop_assert!((derived_x(&p.with_n_s(p.n_s() * f).unwrap()) - f * x).abs() <= 1e-12 * f * x);
        prop_assert!((derived_x(&p.with_n_b(p.n_b() * f).unwrap()) - x / f).abs() <= 1e-12 * x);
    }

    #[test]
    fn roc_curves_are_valid(p in params()) {
        prop_assert_eq!(sfg_roc(&p).check(), Ok(()));
        prop_assert_eq!(ci_roc(&p).check(), Ok(()));
    }

    #[test]
    fn bayes_errors_bounded_by_prior_guess(p in params()) {
        let floor = p.pi0().min(p.pi1());
        for pe in [sfg_bayes(&p).p_error, ci_bayes(&p).p_error] {
            prop_assert!((0.0..=floor + 1e-15).contains(&pe), "{pe} > {floor}");
        }
    }

    #[test]
    fn sfg_threshold_is_optimal(n0 in 0.0f64..3.0, gap in 0.01f64..20.0, pi0 in 0.05f64..0.95) {
        let n1 = n0 + gap;
        let best = sfg_error(n0, n1, pi0).p_error;
        let n_t = sfg_threshold(n0, n1, pi0).unwrap();
        let lo = n_t.map_or(0, |n| n.saturating_sub(3));
        for k in lo..lo + 8 {
            let (pf, pd) = sfg_vertex(n0, n1, k);
            prop_assert!(best <= pi0 * pf + (1.0 - pi0) * (1.0 - pd) + 1e-15);
        }
        prop_assert!(best <= pi0.min(1.0 - pi0) + 1e-15);
    }

    #[test]
    fn sfg_dominates_ci_on_vertex_grid(
        lm in 4.0f64..10.0, ls in -6.0f64..-1.0, lb in -1.0f64..2.0, lk in -3.0f64..0.0, eps in 0.001f64..0.1,
    ) {
        let p = SystemParams::new(10f64.powf(lm), 10f64.powf(ls), 10f64.powf(lb), 10f64.powf(lk), eps, 0.5).unwrap();
        let x = p.derived_x();
        prop_assume!(x > 5.0);
        for v in sfg_roc(&p).vertices().filter(|v| v.p_false_alarm <= 1e-2) {
            prop_assert!(v.p_detect >= v.p_false_alarm.powf(1.0 / (1.0 + x)), "{v:?}");
        }
    }

    #[test]
    fn opa_fading_below_known_target(p in params()) {
        prop_assume!(p.derived_x() > 0.0);
        let fading = opa_snr_fading(&p, &opa_default_gain(&p));
        prop_assert!(fading < opa_snr_known(&p, p.kappa_bar()).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn helstrom_below_chernoff_bound(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_density_matrix(dim, &mut rng);
        let b = random_density_matrix(dim, &mut rng);
        let r = qcb(&a, &b).unwrap();
        prop_assert!(r.satisfies_bound(), "{r:?}");
        prop_assert!((0.0..=1.0).contains(&r.optimal_s));
    }
}

#[test]
fn sfg_approaches_low_brightness_limit() {
    let p = Preset::Fig2a.params();
    let x = p.derived_x();
    let n_s = 1e-6;
    let q = p
        .with_n_s(n_s)
        .unwrap()
        .with_m(x * p.n_b() / (p.kappa_bar() * n_s))
        .unwrap();
    assert!((q.derived_x() - x).abs() < 1e-9 * x);
    let gap = (sfg_bayes(&q).p_error - sfg_bayes_limit(&q)).abs() / sfg_bayes_limit(&q);
    assert!(gap < 0.01, "{gap}");
}
