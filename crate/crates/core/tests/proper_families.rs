use liftgap::instances::{build_cfl_proper_instance, build_lbfl_gap_instance};
use liftgap::proper_constructions::{
    cfl_bad_projection, lbfl_bad_projection, lbfl_gap_report, lbfl_round_fractions, RoundMeasures,
};
use liftgap::rational::{q, qi};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_measures_positive(n in 4usize..40, c_off in 0usize..36) {
        let c = 2 + c_off % (n - 3);
        let m = RoundMeasures::lbfl(n, c).unwrap();
        prop_assert!(m.phi > qi(0) && m.xi > qi(0));
        let (a, b) = lbfl_round_fractions(n, c).unwrap();
        // Simplex facilities are nearly opened: phi * a + xi * b = (n²-1)/n².
        let n2 = qi((n * n) as i64);
        prop_assert_eq!(&a.own * &m.phi + &b.own * &m.xi, (&n2 - qi(1)) / &n2);
    }

    #[test]
    fn cfl_measures_any_t(t in 1usize..7) {
        let inst = build_cfl_proper_instance(7).unwrap();
        let p = cfl_bad_projection(&inst, Some(t)).unwrap();
        prop_assert_eq!(p.cost, q(1, 49));
    }
}

#[test]
fn lbfl_pattern_for_larger_c() {
    for (n, c) in [(6, 3), (7, 4), (7, 5)] {
        let inst = build_lbfl_gap_instance(n, c, &qi(1)).unwrap();
        let p = lbfl_bad_projection(&inst).unwrap();
        let g = lbfl_gap_report(&inst, &p).unwrap();
        assert_eq!(g.gap, q((n * n) as i64, n as i64 - 1), "n={n} c={c}");
    }
}

#[test]
fn lbfl_rejects_degenerate_parameters() {
    assert!(build_lbfl_gap_instance(4, 3, &qi(1)).is_err());
    assert!(lbfl_round_fractions(5, 1).is_err());
}
