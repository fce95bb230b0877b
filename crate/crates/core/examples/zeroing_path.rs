//! Closing the costly facilities one at a time: the node loses feasibility
//! once their total opening can no longer cover the demand.

use liftgap::rational::{fmt_q, qi};
use liftgap::witnesses::{root_from_params, zeroing_path, LsParams, Var};

fn main() -> liftgap::Result<()> {
    let p = LsParams::new(20, 20, qi(10))?;
    let root = root_from_params(&p);
    let set: Vec<Var> = p.costly().map(Var::Y).collect();
    let path = zeroing_path(&root, &p, &set)?;
    for s in &path.steps {
        println!(
            "step {:2}: zero {} (value {}), feasible {}{}",
            s.step,
            s.touched,
            fmt_q(&s.value),
            s.feasible,
            if s.violated.is_empty() { String::new() } else { format!(", violates {:?}", s.violated) }
        );
    }
    println!("first infeasible step: {:?}", path.first_infeasible);
    Ok(())
}
