use super::*;
use crate::instances::{
    build_cfl_proper_instance, build_lbfl_gap_instance, random_instance, ConnectionCosts, FacilityLocationInstance,
    Mode,
};
use crate::rational::{q, qi};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn exclusive_sets_partition_clients() {
    for n in 4..=7 {
        let s = ExclusiveSets::new(n);
        s.check().unwrap();
        assert_eq!(s.shared.len(), n * n + n - 1);
        assert_eq!(s.exclusive[0].len(), n * n - 1);
    }
}

#[test]
fn round_measures_positive() {
    for n in 4..=12 {
        for c in 2..=n - 2 {
            let m = RoundMeasures::lbfl(n, c).unwrap();
            assert_eq!(m.phi, q((n * n + n - 1) as i64, (n * n) as i64));
        }
    }
    assert!(RoundMeasures::lbfl(4, 3).is_err());
    assert!(RoundMeasures::lbfl(5, 1).is_err());
}

#[test]
fn closed_form_fractions_at_five() {
    let (a, b) = lbfl_round_fractions(5, 2).unwrap();
    assert_eq!(a.own, q(1, 2));
    assert_eq!(a.far, q(25, 58));
    let (_, b4) = lbfl_round_fractions(4, 2).unwrap();
    assert_eq!(b4.cross, q(1, 45));
    assert_eq!(b.own, q(3, 4));
}

#[test]
fn enumeration_matches_closed_form_at_four() {
    let e = enumerate_round_fractions(4, 2, 1_000_000).unwrap();
    assert_eq!(e.type_a_classes, 174_420);
    assert_eq!(e.type_b_classes, 630);
    assert!(e.nonuniform_roles.is_empty(), "{:?}", e.nonuniform_roles);
    assert!(e.matches_closed_form, "{:?}", e.mismatches);
    assert_eq!(e.a.cross, q(1, 90));
    assert_eq!(e.b.cross, q(1, 45));
    assert!(matches!(
        enumerate_round_fractions(5, 2, 1_000_000),
        Err(Error::BudgetExceeded { .. })
    ));
}

#[test]
fn lbfl_projection_at_five() {
    let inst = build_lbfl_gap_instance(5, 2, &qi(1)).unwrap();
    let p = lbfl_bad_projection(&inst).unwrap();
    assert_eq!(p.y_simplex, q(24, 25));
    assert_eq!(p.y_far, q(29, 50));
    assert_eq!(p.cross, q(1, 75));
    assert!(p.far_unchanged_by_b);
    let g = lbfl_gap_report(&inst, &p).unwrap();
    assert_eq!(g.fractional_cost, q(96, 25));
    assert_eq!(g.integral_lower_bound, qi(24));
    assert_eq!(g.gap, q(25, 4));
}

#[test]
fn lbfl_gap_grows() {
    let gaps: Vec<Q> = (4..=7)
        .map(|n| {
            let inst = build_lbfl_gap_instance(n, 2, &qi(1)).unwrap();
            let p = lbfl_bad_projection(&inst).unwrap();
            lbfl_gap_report(&inst, &p).unwrap().gap
        })
        .collect();
    for (k, g) in gaps.iter().enumerate() {
        let n = (k + 4) as i64;
        assert_eq!(*g, q(n * n, n - 1));
        assert!(*g >= qi(n));
    }
}

#[test]
fn brute_force_meets_bound_at_three() {
    let (opt, bound) = lbfl_bound_brute_force(3, &qi(1), 1 << 10).unwrap();
    assert_eq!(bound, qi(8));
    assert!(opt >= bound);
}

#[test]
fn density_examples() {
    let cl = Class::new(
        vec![0, 1, 2],
        (0..9).map(|j| (j / 3, j)).collect(),
    );
    assert_eq!(class_density(&cl, None).unwrap(), qi(3));
    let cl = Class::new(vec![1, 2], (0..8).map(|j| (if j < 5 { 1 } else { 2 }, j)).collect());
    assert_eq!(class_density(&cl, Some(0)).unwrap(), qi(4));
    let solo = Class::new(vec![0], vec![(0, 0)]);
    assert!(class_density(&solo, Some(0)).is_err());
}

#[test]
fn cfl_support_has_density_u() {
    let inst = build_cfl_proper_instance(5).unwrap();
    let s = cfl_canonical_support(&inst).unwrap();
    assert!(s.projects_to_integral);
    assert_eq!(s.classes.len(), 5);
    assert!(s.densities.iter().all(|d| *d == qi(25)));
}

#[test]
fn cfl_projection_and_gap() {
    let inst = build_cfl_proper_instance(5).unwrap();
    let p = cfl_bad_projection(&inst, None).unwrap();
    assert_eq!(p.y_special, q(1, 25));
    assert_eq!(p.x_special, q(1, 101));
    assert_eq!(p.x_regular, q(25, 101));
    let g = cfl_gap_report(&inst, &p).unwrap();
    assert_eq!(g.integral_optimum, qi(1));
    assert_eq!(g.gap, qi(25));
    assert_eq!(g.integral_method, "subset-brute-force");
    for t in 1..=4 {
        assert_eq!(cfl_bad_projection(&inst, Some(t)).unwrap().cost, q(1, 25));
    }
    assert!(cfl_bad_projection(&inst, Some(5)).is_err());
    let m = RoundMeasures::cfl(5, 4).unwrap();
    assert_eq!(m.phi, q(1, 20));
}

fn toy(mode: Mode, n: usize, m: usize, u: u64) -> LabeledInstance {
    let mut costs = ConnectionCosts::uniform(qi(1));
    for j in 0..m {
        costs.set(j % n, j, qi(0));
    }
    LabeledInstance::plain(FacilityLocationInstance {
        mode,
        n_facilities: n,
        n_clients: m,
        opening_cost: (0..n).map(|i| qi(i as i64 + 1)).collect(),
        connection_cost: costs,
        capacity_or_bound: u,
        metric: true,
    })
}

#[test]
fn gap_one_on_toys() {
    for inst in [toy(Mode::Cfl, 2, 3, 2), toy(Mode::Lbfl, 2, 4, 2)] {
        let (cs, r) = theorem_gap1_classset(&inst, 1 << 16).unwrap();
        assert!(!cs.is_empty());
        assert!(r.passed, "{r:?}");
        assert_eq!(r.complexity, qi(1));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let inst = LabeledInstance::plain(random_instance(&mut rng, 3, 4, Mode::Cfl, 2).unwrap());
    assert!(theorem_gap1_classset(&inst, 1 << 16).unwrap().1.passed);
}

#[test]
fn example1_separates() {
    let r = example1_verify().unwrap();
    assert!(r.star_feasible && r.stars_admissible && r.star_marginals_match);
    assert!(!r.constellation_feasible);
    assert!(r.farkas_bound.is_some());
    assert_eq!(r.class_set_complexity, q(3, 4));
    assert_eq!(r.far_measure_lower_bound, q(18, 10));
    assert!(r.orbits_contain_first_two);
    assert!(r.passed);
}
