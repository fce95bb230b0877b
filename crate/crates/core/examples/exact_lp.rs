//! Exact simplex with optimality and infeasibility certificates.

use liftgap::lp::{LinearProgram, Relation};
use liftgap::rational::{fmt_q, q, qi};
use liftgap::solver::{dual_bound, infeasibility_bound, solve_lp, LpStatus};

fn main() -> liftgap::Result<()> {
    // min x + 2y  s.t.  x + y >= 3/2,  x <= 1
    let mut lp = LinearProgram::new();
    let x = lp.add_var("x");
    let y = lp.add_var("y");
    lp.add_constraint(vec![(x, qi(1)), (y, qi(1))], Relation::Ge, q(3, 2));
    lp.add_constraint(vec![(x, qi(1))], Relation::Le, qi(1));
    lp.set_objective(vec![(x, qi(1)), (y, qi(2))]);
    let sol = solve_lp(&lp)?;
    println!("status {:?}, objective {}", sol.status, fmt_q(sol.objective.as_ref().unwrap()));
    for (n, v) in sol.names.iter().zip(&sol.values) {
        println!("  {n} = {}", fmt_q(v));
    }
    println!("dual bound {}", fmt_q(&dual_bound(&lp, &sol.duals).unwrap()));

    lp.add_constraint(vec![(y, qi(1))], Relation::Le, q(1, 4));
    let sol = solve_lp(&lp)?;
    assert_eq!(sol.status, LpStatus::Infeasible);
    println!("after y <= 1/4: infeasible, Farkas bound {}", fmt_q(&infeasibility_bound(&lp, &sol.duals).unwrap()));
    Ok(())
}
