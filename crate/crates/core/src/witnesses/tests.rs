use num_traits::{One, Zero};

use super::*;
use crate::instances::build_ls_instance;
use crate::ls_hierarchy::{protection_matrix_check, symmetry_factor_check, ConeVector, ProtectionMatrixView, WitnessPair};
use crate::rational::{q, qi};
use crate::relaxations::{standard_lp, StdLayout};
use crate::solver::check_feasible;
use std::collections::BTreeMap;

fn setup(n: usize, l: usize) -> (LsParams, OrbitSolution) {
    let inst = build_ls_instance(n, l, &qi(10)).unwrap();
    let p = LsParams::from_instance(&inst).unwrap();
    let root = root_solution(&inst).unwrap();
    (p, root)
}

#[test]
fn root_values() {
    let inst = build_ls_instance(20, 20, &qi(10)).unwrap();
    let root = root_solution(&inst).unwrap();
    let prof = &root.x_orbits[0].profile;
    assert_eq!(prof[0], q(399, 8000));
    assert_eq!(prof[20], q(1, 8000));
    assert_eq!(root.cost(&inst), q(1, 2));
    let cover: Q = prof.iter().sum();
    assert!(cover.is_one());
    assert_eq!(root.depth, 0);
    assert_eq!(root.x_orbits.len(), 1);
}

#[test]
fn close_costly_facility() {
    let (p, root) = setup(20, 20);
    let child = touch(&root, &p, Var::Y(20), WitnessType::Type2).unwrap();
    assert!(child.y[20].is_zero());
    let prof = &child.x_orbits[0].profile;
    assert!(prof[20].is_zero());
    let f = &p.b / (Q::one() - &p.b);
    let growth = f * (p.b.recip() - Q::one()) * (&p.a / qi(20)) / qi(20);
    assert_eq!(prof[0], q(399, 8000) + growth);
    assert_eq!(prof[21], q(1, 8000));
    assert!(verify_node_feasibility(&child, &p).feasible);
}

#[test]
fn assign_to_costly() {
    let (p, root) = setup(20, 20);
    let (child, case) = touch_case(&root, &p, Var::X(25, 7), WitnessType::Type1).unwrap();
    assert_eq!(case, Case::C1b);
    assert!(child.y[25].is_one());
    assert!(child.value(Var::X(25, 7)).unwrap().is_one());
    assert!(child.value(Var::X(0, 7)).unwrap().is_zero());
    assert_eq!(child.value(Var::X(25, 8)).unwrap(), q(1, 8000));
    assert_eq!(child.x_orbits.len(), 2);
}

#[test]
fn every_case_keeps_clients_covered() {
    let (p, root) = setup(20, 20);
    let d1 = touch(&root, &p, Var::Y(30), WitnessType::Type1).unwrap();
    let touches = [
        (Var::Y(21), WitnessType::Type1),
        (Var::Y(21), WitnessType::Type2),
        (Var::X(21, 3), WitnessType::Type1),
        (Var::X(21, 3), WitnessType::Type2),
        (Var::X(30, 3), WitnessType::Type2),
        (Var::X(2, 3), WitnessType::Type1),
        (Var::X(2, 3), WitnessType::Type2),
    ];
    for (var, wt) in touches {
        let c = touch(&d1, &p, var, wt).unwrap();
        let f = verify_node_feasibility(&c, &p);
        assert!(f.feasible, "{var} {wt:?}: {:?}", f.violations);
        assert!(!f.cites("cover"));
    }
}

#[test]
fn integral_touch_is_forced() {
    let (p, root) = setup(20, 20);
    let (c, case) = touch_case(&root, &p, Var::Y(0), WitnessType::Type1).unwrap();
    assert_eq!(case, Case::Forced);
    assert_eq!(c.y, root.y);
    assert!(touch(&root, &p, Var::Y(0), WitnessType::Type2).is_err());
}

#[test]
fn depth_cap_enforced() {
    let (p, root) = setup(10, 10);
    let c = touch(&root, &p, Var::Y(10), WitnessType::Type2).unwrap();
    assert!(matches!(touch(&c, &p, Var::Y(11), WitnessType::Type2), Err(Error::BudgetExceeded { .. })));
    assert!(touch_uncapped(&c, &p, Var::Y(11), WitnessType::Type2).is_ok());
}

#[test]
fn root_invariants_tight() {
    let (p, root) = setup(20, 20);
    let r = verify_invariants(&root, &p);
    assert!(r.all_hold, "{:?}", r.failures());
    let inv1 = r.get("1").unwrap();
    assert_eq!(inv1.slack, Some(Q::zero()));
    assert_eq!(r.get("2b").unwrap().slack, Some(Q::zero()));
}

#[test]
fn invariants_after_closing() {
    let (p, root) = setup(20, 20);
    let c = touch(&root, &p, Var::Y(20), WitnessType::Type2).unwrap();
    let r = verify_invariants(&c, &p);
    assert!(r.all_hold, "{:?}", r.failures());
    assert!(r.get("2a").unwrap().slack.as_ref().unwrap() > &Q::zero());
    assert_eq!(r.get("1").unwrap().checked, 19);
}

#[test]
fn invariants_two_levels_deep() {
    let (p, root) = setup(30, 30);
    let c1 = touch(&root, &p, Var::Y(30), WitnessType::Type2).unwrap();
    let c2 = touch(&c1, &p, Var::X(31, 0), WitnessType::Type2).unwrap();
    let r = verify_invariants(&c2, &p);
    assert!(r.all_hold, "{:?}", r.failures());
    assert!(verify_node_feasibility(&c2, &p).feasible);
    assert_eq!(r.zeroed_cheap_assignments, 0);
}

#[test]
fn zeroing_count_after_cheap_type2() {
    let (p, root) = setup(20, 20);
    let c = touch(&root, &p, Var::X(0, 5), WitnessType::Type2).unwrap();
    let r = verify_invariants(&c, &p);
    assert_eq!(r.zeroed_cheap_assignments, 1);
    assert!(r.zeroing_bound_holds);
}

#[test]
fn corrupted_node_is_infeasible() {
    let (p, mut root) = setup(20, 20);
    root.y[25] = q(3, 2);
    let f = verify_node_feasibility(&root, &p);
    assert!(!f.feasible);
    assert!(f.cites("y_bounds"));
}

#[test]
fn twin_identity_at_root() {
    let (p, root) = setup(20, 20);
    for var in [Var::Y(20), Var::X(0, 0), Var::X(20, 0)] {
        let a = touch(&root, &p, var, WitnessType::Type1).unwrap();
        let b = touch(&root, &p, var, WitnessType::Type2).unwrap();
        assert!(twin_identity(&root, var, &a, &b).unwrap(), "{var}");
    }
}

#[test]
fn witness_family_at_root() {
    let (p, root) = setup(20, 20);
    let r = check_witness_family(&root, &p).unwrap();
    assert!(r.passed, "{:?}", r);
    assert_eq!(r.coordinates, 40 * 3);
}

#[test]
fn symmetry_mutation_detected() {
    let (p, root) = setup(20, 20);
    let frame = Frame::of(&root);
    let z = frame.restrict(&root).unwrap();
    let mut pairs: Vec<WitnessPair> = (0..frame.dim())
        .map(|k| {
            let var = frame.var(k);
            let v = root.value(var).unwrap();
            let w = |wt| touch(&root, &p, var, wt).map(|c| frame.restrict(&c).unwrap()).ok();
            WitnessPair {
                variable: k,
                type1: if v.is_zero() { None } else { w(WitnessType::Type1) },
                type2: if v.is_one() { None } else { w(WitnessType::Type2) },
            }
        })
        .collect();
    assert!(symmetry_factor_check(&z, &pairs).unwrap().passed);
    // Swap the entries of two Cheap coordinates in the witness of a Costly y.
    let (a, b) = (40, 41);
    let w = pairs[20].type1.as_mut().unwrap();
    w.coords.swap(a, b);
    w.coords[a] += q(1, 10_000);
    let r = symmetry_factor_check(&z, &pairs).unwrap();
    assert!(!r.passed);
    assert!(r.violations.iter().any(|v| v.indices.contains(&20)));
}

#[test]
fn dense_protection_matrix_micro() {
    let inst = build_ls_instance(3, 3, &qi(2)).unwrap();
    let p = LsParams::from_instance(&inst).unwrap();
    let root = root_solution(&inst).unwrap();
    let lp = standard_lp(&inst.base);
    let lay = StdLayout::of(&inst.base);
    let z = root.expand(1 << 16).unwrap().to_point();
    assert!(check_feasible(&z, &lp).unwrap().feasible);
    let var_of = |k: usize| {
        if k < lay.n {
            Var::Y(k)
        } else {
            Var::X((k - lay.n) / lay.m, (k - lay.n) % lay.m)
        }
    };
    let mut type1 = BTreeMap::new();
    for (k, zk) in z.iter().enumerate() {
        if !zk.is_zero() {
            let c = touch_uncapped(&root, &p, var_of(k), WitnessType::Type1).unwrap();
            type1.insert(k, ConeVector::point(c.expand(1 << 16).unwrap().to_point()));
        }
    }
    let view = ProtectionMatrixView::from_type1(ConeVector::point(z.clone()), &type1);
    let oracle = |w: &ConeVector| Ok(w.z0.is_one() && check_feasible(&w.coords, &lp)?.feasible);
    let r = protection_matrix_check(&view, &oracle).unwrap();
    assert!(r.passed, "{:?}", &r.violations[..r.violations.len().min(5)]);
    let costly = lay.y(3);
    let mut bad = type1.clone();
    bad.get_mut(&costly).unwrap().coords[lay.x(0, 0)] *= q(11, 10);
    let view = ProtectionMatrixView::from_type1(ConeVector::point(z), &bad);
    let r = protection_matrix_check(&view, &oracle).unwrap();
    assert!(r.violations.iter().any(|v| v.condition == "symmetry"));
}

#[test]
fn zeroing_path_closes_all_costly() {
    let (p, root) = setup(20, 20);
    let set: Vec<Var> = p.costly().map(Var::Y).collect();
    let path = zeroing_path(&root, &p, &set).unwrap();
    assert_eq!(path.steps.len(), 20);
    assert!(path.all_zeroed);
    assert_eq!(path.first_infeasible, Some(20));
    assert!(path.steps.iter().all(|s| s.growth_bound_holds));
    let last = verify_node_feasibility(path.nodes.last().unwrap(), &p);
    assert!(last.cites("capacity"));
}

#[test]
fn zeroing_path_single_and_precondition() {
    let (p, root) = setup(20, 20);
    let one = zeroing_path(&root, &p, &[Var::Y(20)]).unwrap();
    assert_eq!(one.steps.len(), 1);
    assert_eq!(one.steps[0].value, q(1, 40));
    assert!(zeroing_path(&root, &p, &[Var::Y(0)]).is_err());
}

#[test]
fn tree_depth_zero_is_root() {
    let (p, root) = setup(10, 10);
    let t = build_tree(&root, &p, 0, &Strategy::AllChildrenPerNode).unwrap();
    assert_eq!(t.node_count, 1);
    assert!(t.all_passed);
}

#[test]
fn full_tree_depth_one() {
    let (p, root) = setup(10, 10);
    let t = build_tree(&root, &p, 1, &Strategy::AllChildrenPerNode).unwrap();
    assert_eq!(t.node_count, 1 + 2 * 10 + 2 * 20);
    assert!(t.all_passed, "{:?}", t.nodes.iter().find(|n| !n.passed));
    assert!(build_tree(&root, &p, 2, &Strategy::AllChildrenPerNode).is_err());
}

#[test]
fn closing_path_fails_at_last_step() {
    let (p, root) = setup(20, 20);
    let path: Vec<_> = p.costly().map(|i| (Var::Y(i), WitnessType::Type2)).collect();
    let t = build_tree(&root, &p, 0, &Strategy::Paths(vec![path])).unwrap();
    let bad = t.first_failure.expect("path must fail");
    let node = &t.nodes[bad];
    assert_eq!(node.depth, 19);
    assert!(node.feasibility.feasible);
    let fam = node.witnesses.as_ref().unwrap();
    assert_eq!(fam.infeasible_children, vec!["y[39] Type2".to_string()]);
}

#[test]
fn expansion_matches_orbits() {
    let (p, root) = setup(2, 1);
    let c = touch_uncapped(&root, &p, Var::X(0, 4), WitnessType::Type2).unwrap();
    let d = c.expand(1 << 10).unwrap();
    assert!(d.x[0][4].is_zero());
    assert_eq!(d.x[0][3], root.x_orbits[0].profile[0]);
    assert!(root.expand(3).is_err());
}
