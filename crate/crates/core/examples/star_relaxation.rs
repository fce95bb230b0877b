//! Standard and star relaxations agree; strip packing converts between them.

use liftgap::instances::{random_instance, Mode};
use liftgap::rational::fmt_q;
use liftgap::relaxations::{classic_to_star, standard_lp, star_lp, star_marginals, StdLayout, YxSolution};
use liftgap::solver::solve_lp;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> liftgap::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let inst = random_instance(&mut rng, 3, 6, Mode::Cfl, 3)?;
    let std = solve_lp(&standard_lp(&inst))?;
    let (lp, stars) = star_lp(&inst, None, 100_000)?;
    let star = solve_lp(&lp)?;
    println!("standard LP {}", fmt_q(std.objective.as_ref().unwrap()));
    println!("star LP     {} over {} stars", fmt_q(star.objective.as_ref().unwrap()), stars.len());

    let sol = YxSolution::from_point(StdLayout::of(&inst), &std.values);
    let packed = classic_to_star(&inst, &sol)?;
    println!("strip packing gives {} weighted stars:", packed.len());
    for (s, w) in &packed {
        println!("  facility {} clients {:?} weight {}", s.facility, s.clients, fmt_q(w));
    }
    assert_eq!(star_marginals(&inst, &packed), sol);
    println!("marginals reproduce the standard solution exactly");
    Ok(())
}
