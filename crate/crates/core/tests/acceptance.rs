//! Acceptance run: one line per criterion, nonzero exit on any failure.
//! All value checks are exact rational comparisons; the only tolerances are
//! the wall-clock limits below.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use liftgap::instances::{
    build_cfl_proper_instance, build_lbfl_gap_instance, build_ls_instance, random_instance, LabeledInstance, Mode,
};
use liftgap::ls_hierarchy::{
    brute_membership, integral_points, micro_cfl_polytope, micro_grid, oracle_crosscheck, psd_restriction_check,
};
use liftgap::proper_constructions::{
    cfl_bad_projection, cfl_gap_report, enumerate_round_fractions, example1_verify, lbfl_bad_projection,
    lbfl_bound_brute_force, lbfl_gap_report, theorem_gap1_classset,
};
use liftgap::rational::{fmt_q, q, qi, Q};
use liftgap::relaxations::{classic_to_star, standard_lp, star_lp, star_marginals, YxSolution, StdLayout};
use liftgap::solver::solve_lp;
use liftgap::witnesses::{build_tree, root_solution, zeroing_path, LsParams, Strategy, Var};

const LIMIT_1: Duration = Duration::from_secs(60);
const LIMIT_2: Duration = Duration::from_secs(60);
const LIMIT_3: Duration = Duration::from_secs(300);
const LIMIT_4: Duration = Duration::from_secs(120);
const LIMIT_5: Duration = Duration::from_secs(120);
const LIMIT_6: Duration = Duration::from_secs(1200);
const LIMIT_7: Duration = Duration::from_secs(60);
const LIMIT_8: Duration = Duration::from_secs(300);
const LIMIT_9: Duration = Duration::from_secs(60);

/// Grid spacing 1/3 over four free coordinates: 256 points.
const ORACLE_GRID_STEPS: u32 = 3;
const ORACLE_MIN_POINTS: usize = 100;
const SAMPLE_SEED: u64 = 1;
const SAMPLE_WIDTH: usize = 4;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: liftgap::Error) -> String {
    err.to_string()
}

fn random_toy(seed: u64, max_fac: usize, max_cli: usize) -> liftgap::instances::FacilityLocationInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=max_fac);
    let m = rng.gen_range(3..=max_cli);
    let mode = if seed.is_multiple_of(2) { Mode::Cfl } else { Mode::Lbfl };
    let bound = match mode {
        Mode::Cfl => (m.div_ceil(n) + rng.gen_range(0..=1)) as u64,
        Mode::Lbfl => rng.gen_range(1..=(m / n).max(1)) as u64,
    };
    random_instance(&mut rng, n, m, mode, bound).expect("valid random instance")
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for seed in 0..50u64 {
        let inst = random_toy(seed, 4, 8);
        let std = solve_lp(&standard_lp(&inst)).map_err(e)?;
        let (slp, _) = star_lp(&inst, None, 100_000).map_err(e)?;
        let star = solve_lp(&slp).map_err(e)?;
        ensure(std.objective == star.objective, || {
            format!("seed {seed}: standard {:?} vs star {:?}", std.objective, star.objective)
        })?;
        let sol = YxSolution::from_point(StdLayout::of(&inst), &std.values);
        let stars = classic_to_star(&inst, &sol).map_err(e)?;
        ensure(star_marginals(&inst, &stars) == sol, || format!("seed {seed}: marginals differ"))?;
        let cost: Q = stars.iter().map(|(s, w)| s.cost(&inst) * w).sum();
        ensure(cost == sol.cost(&inst), || format!("seed {seed}: round-trip cost differs"))?;
        checked += 1;
    }
    Ok(format!("{checked} instances, standard = star exactly, round trips exact"))
}

fn criterion_2() -> Outcome {
    let mut gaps = Vec::new();
    for n in [3usize, 5, 10] {
        let inst = build_cfl_proper_instance(n).map_err(e)?;
        let proj = cfl_bad_projection(&inst, None).map_err(e)?;
        let n2 = qi((n * n) as i64);
        ensure(proj.cost == Q::one() / &n2, || format!("n={n}: cost {}", fmt_q(&proj.cost)))?;
        let g = cfl_gap_report(&inst, &proj).map_err(e)?;
        ensure(g.integral_optimum.is_one(), || format!("n={n}: integral optimum {}", fmt_q(&g.integral_optimum)))?;
        ensure(g.gap == n2, || format!("n={n}: gap {}", fmt_q(&g.gap)))?;
        gaps.push(format!("n={n} gap={} ({})", fmt_q(&g.gap), g.integral_method));
    }
    Ok(gaps.join(", "))
}

fn criterion_3() -> Outcome {
    let en = enumerate_round_fractions(4, 2, 1_000_000).map_err(e)?;
    ensure(en.matches_closed_form, || format!("n=4 enumeration: {:?} {:?}", en.mismatches, en.nonuniform_roles))?;
    let mut gaps: Vec<(usize, Q)> = Vec::new();
    for n in [5usize, 6, 7] {
        let inst = build_lbfl_gap_instance(n, 2, &qi(1)).map_err(e)?;
        let proj = lbfl_bad_projection(&inst).map_err(e)?;
        let n2 = qi((n * n) as i64);
        ensure(proj.own == (&n2 - qi(1)) / &n2, || format!("n={n}: own {}", fmt_q(&proj.own)))?;
        ensure(proj.cross == Q::one() / (&n2 * qi(n as i64 - 2)), || format!("n={n}: cross {}", fmt_q(&proj.cross)))?;
        ensure(proj.y_simplex == (&n2 - qi(1)) / &n2, || format!("n={n}: y {}", fmt_q(&proj.y_simplex)))?;
        ensure(proj.y_far == (&n2 + qi(n as i64 - 1)) / (qi(2) * &n2), || format!("n={n}: y far"))?;
        let g = lbfl_gap_report(&inst, &proj).map_err(e)?;
        ensure(g.gap >= qi(n as i64), || format!("n={n}: gap {} below n", fmt_q(&g.gap)))?;
        gaps.push((n, g.gap));
    }
    let steps: Vec<Q> = gaps.windows(2).map(|w| &w[1].1 - &w[0].1).collect();
    ensure(steps.iter().all(|s| s.is_positive()), || "gap not increasing".into())?;
    ensure(steps.windows(2).all(|w| w[1] >= w[0]), || "gap increments shrink".into())?;
    let (opt, bound) = lbfl_bound_brute_force(3, &qi(1), 1 << 10).map_err(e)?;
    ensure(opt >= bound, || format!("n=3 brute force {} below bound {}", fmt_q(&opt), fmt_q(&bound)))?;
    Ok(format!(
        "n=4 classes {}+{} match closed form; gaps {}; n=3 optimum {} >= bound {}",
        en.type_a_classes,
        en.type_b_classes,
        gaps.iter().map(|(n, g)| format!("n={n}:{}", fmt_q(g))).collect::<Vec<_>>().join(" "),
        fmt_q(&opt),
        fmt_q(&bound)
    ))
}

fn criterion_4() -> Outcome {
    let r = example1_verify().map_err(e)?;
    ensure(r.star_feasible && r.stars_admissible && r.star_marginals_match, || "target not star feasible".into())?;
    ensure(!r.constellation_feasible && r.farkas_bound.is_some(), || "3/4 class set reaches the target".into())?;
    ensure(r.class_set_complexity == q(3, 4), || format!("complexity {}", fmt_q(&r.class_set_complexity)))?;
    ensure(r.far_measure_lower_bound == q(18, 10) && r.far_measure_certified, || "measure bound".into())?;
    ensure(r.passed, || "report not passed".into())?;
    Ok(format!(
        "{} stars feasible; {} orbit types ({} classes) infeasible, Farkas bound {}",
        r.stars,
        r.orbit_types,
        r.classes_represented,
        r.farkas_bound.as_ref().map(fmt_q).unwrap_or_default()
    ))
}

fn criterion_5() -> Outcome {
    let mut done = 0;
    for seed in 100..110u64 {
        let inst = LabeledInstance::plain(random_toy(seed, 3, 5));
        let (_, r) = theorem_gap1_classset(&inst, 1 << 16).map_err(e)?;
        ensure(r.passed && r.lp_optimum == r.integral_optimum, || format!("seed {seed}: {r:?}"))?;
        done += 1;
    }
    Ok(format!("{done} instances with gap exactly 1"))
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for (n, depth, strategy) in [
        (20usize, 2usize, Strategy::AllChildrenPerNode),
        (
            30,
            3,
            Strategy::RandomSample {
                seed: SAMPLE_SEED,
                width: SAMPLE_WIDTH,
            },
        ),
    ] {
        let inst = build_ls_instance(n, n, &qi(10)).map_err(e)?;
        let p = LsParams::from_instance(&inst).map_err(e)?;
        let root = root_solution(&inst).map_err(e)?;
        let t = build_tree(&root, &p, depth, &strategy).map_err(e)?;
        ensure(t.all_passed && t.failures == 0, || {
            let bad = t.nodes.iter().find(|nd| !nd.passed);
            format!("n={n}: {} failures, first {:?}", t.failures, bad.map(|b| &b.failure))
        })?;
        ensure(t.witness_families_checked > 0, || "no witness families checked".into())?;
        parts.push(format!(
            "n={n} depth {depth} {}: {} nodes, {} witness families",
            strategy.name(),
            t.node_count,
            t.witness_families_checked
        ));
    }
    Ok(parts.join("; "))
}

fn criterion_7() -> Outcome {
    let inst = build_ls_instance(20, 20, &qi(10)).map_err(e)?;
    let p = LsParams::from_instance(&inst).map_err(e)?;
    let root = root_solution(&inst).map_err(e)?;
    let set: Vec<Var> = p.costly().map(Var::Y).collect();
    let path = zeroing_path(&root, &p, &set).map_err(e)?;
    match path.first_infeasible {
        Some(s) if s <= 20 => Ok(format!("infeasible at step {s}")),
        other => Err(format!("first infeasible step {other:?}")),
    }
}

fn criterion_8() -> Outcome {
    let k = micro_cfl_polytope();
    ensure(k.num_vars() <= 12, || "micro polytope too large".into())?;
    let grid = micro_grid(ORACLE_GRID_STEPS);
    ensure(grid.len() >= ORACLE_MIN_POINTS, || format!("only {} grid points", grid.len()))?;
    let r = oracle_crosscheck(&k, &grid).map_err(e)?;
    ensure(r.all_agree, || format!("{} disagreements", r.disagreements.len()))?;
    let verts = integral_points(&k).map_err(e)?;
    for v in &verts {
        ensure(brute_membership(&k, v, 2).map_err(e)?, || format!("vertex {:?} cut", v.coords))?;
    }
    Ok(format!("{} points agree ({} members); {} vertices survive 2 rounds", r.points, r.members, verts.len()))
}

fn criterion_9() -> Outcome {
    let mut parts = Vec::new();
    for n in [10usize, 20, 30] {
        let p = LsParams::new(n, n, qi(10)).map_err(e)?;
        let root = liftgap::witnesses::root_from_params(&p);
        let r = psd_restriction_check(&root.y).map_err(e)?;
        ensure(r.psd && r.pivots.iter().all(|v| !v.is_negative()), || format!("n={n}: not PSD"))?;
        let zeros = r.pivots.iter().filter(|v| v.is_zero()).count();
        parts.push(format!("n={n}: {} pivots ({zeros} zero)", r.pivots.len()));
    }
    Ok(parts.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("star/classic equivalence", criterion_1, LIMIT_1),
        ("CFL proper gap n^2", criterion_2, LIMIT_2),
        ("LBFL proper construction", criterion_3, LIMIT_3),
        ("four-facility example", criterion_4, LIMIT_4),
        ("integral class set has gap 1", criterion_5, LIMIT_5),
        ("LS witness tree survival", criterion_6, LIMIT_6),
        ("LS zeroing path", criterion_7, LIMIT_7),
        ("oracle equivalence", criterion_8, LIMIT_8),
        ("LS+ diagonal PSD", criterion_9, LIMIT_9),
    ];
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit {limit:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {}: {} [{name}] {:.1}s - {detail}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
