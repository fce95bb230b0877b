//! Lower-bounded family: enumerated class fractions, the combined bad
//! solution and its gap against the two-case integral bound.

use liftgap::instances::build_lbfl_gap_instance;
use liftgap::proper_constructions::{
    enumerate_round_fractions, lbfl_bad_projection, lbfl_bound_brute_force, lbfl_gap_report, lbfl_round_fractions,
};
use liftgap::rational::{fmt_q, qi};

fn main() -> liftgap::Result<()> {
    let en = enumerate_round_fractions(4, 2, 1_000_000)?;
    let (a, b) = lbfl_round_fractions(4, 2)?;
    println!(
        "n=4: {} type A and {} type B classes; cross fractions {} / {} (closed form {} / {}); match: {}",
        en.type_a_classes,
        en.type_b_classes,
        fmt_q(&en.a.cross),
        fmt_q(&en.b.cross),
        fmt_q(&a.cross),
        fmt_q(&b.cross),
        en.matches_closed_form
    );
    for n in 5..=7 {
        let inst = build_lbfl_gap_instance(n, 2, &qi(1))?;
        let p = lbfl_bad_projection(&inst)?;
        let g = lbfl_gap_report(&inst, &p)?;
        println!(
            "n={n}: phi={} xi={} y={} y_far={} cross={} cost={} bound={} gap={}",
            fmt_q(&p.measures.phi),
            fmt_q(&p.measures.xi),
            fmt_q(&p.y_simplex),
            fmt_q(&p.y_far),
            fmt_q(&p.cross),
            fmt_q(&g.fractional_cost),
            fmt_q(&g.integral_lower_bound),
            fmt_q(&g.gap)
        );
    }
    let (opt, bound) = lbfl_bound_brute_force(3, &qi(1), 1 << 10)?;
    println!("n=3 geometry: brute-force optimum {} against bound {}", fmt_q(&opt), fmt_q(&bound));
    Ok(())
}
