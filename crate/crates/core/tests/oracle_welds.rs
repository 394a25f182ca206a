use proptest::prelude::*;

use qi_fading::analytic::sfg_error;
use qi_fading::oracle::{auto_dim, helstrom, thermal_state, Truncation};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn thermal_helstrom_equals_count_test(n1 in 0.05f64..5.0, frac in 0.0f64..1.0, pi0 in 0.1f64..0.9) {
        let n0 = frac * n1 * 0.999;
        let dim = auto_dim(n1, 1e-12);
        let t = Truncation::new(dim, 1e-12);
        let oracle = helstrom(&thermal_state(n0, t).unwrap(), &thermal_state(n1, t).unwrap(), pi0).unwrap();
        let analytic = sfg_error(n0, n1, pi0).p_error;
        prop_assert!((oracle - analytic).abs() < 1e-8, "{oracle} vs {analytic}");
    }
}

#[test]
fn weld_holds_with_unequal_priors_and_large_gap() {
    for &(n0, n1, pi0) in &[(1e-4, 4.9, 0.5), (0.3, 0.35, 0.5), (0.01, 2.0, 0.9), (1.0, 5.0, 0.2)] {
        let t = Truncation::new(auto_dim(n1, 1e-12), 1e-12);
        let oracle = helstrom(&thermal_state(n0, t).unwrap(), &thermal_state(n1, t).unwrap(), pi0).unwrap();
        assert!((oracle - sfg_error(n0, n1, pi0).p_error).abs() < 1e-8);
    }
}
