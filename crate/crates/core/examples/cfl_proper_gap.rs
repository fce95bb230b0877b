//! Capacitated family: the bad solution costs 1/n² while every integral
//! solution pays 1.

use liftgap::instances::build_cfl_proper_instance;
use liftgap::proper_constructions::{cfl_bad_projection, cfl_canonical_support, cfl_gap_report};
use liftgap::rational::fmt_q;

fn main() -> liftgap::Result<()> {
    let inst = build_cfl_proper_instance(5)?;
    let support = cfl_canonical_support(&inst)?;
    println!(
        "canonical support: {} classes, densities {:?}",
        support.classes.len(),
        support.densities.iter().map(fmt_q).collect::<Vec<_>>()
    );
    for n in [3, 5, 10] {
        let inst = build_cfl_proper_instance(n)?;
        let p = cfl_bad_projection(&inst, None)?;
        let g = cfl_gap_report(&inst, &p)?;
        println!(
            "n={n:2}: y_costly={} x_costly={} x_regular={} cost={} integral={} ({}) gap={}",
            fmt_q(&p.y_special),
            fmt_q(&p.x_special),
            fmt_q(&p.x_regular),
            fmt_q(&g.fractional_cost),
            fmt_q(&g.integral_optimum),
            g.integral_method,
            fmt_q(&g.gap)
        );
    }
    Ok(())
}
