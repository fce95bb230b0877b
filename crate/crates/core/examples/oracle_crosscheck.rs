//! Two independent one-round membership oracles on a six-variable polytope.

use liftgap::ls_hierarchy::{
    brute_membership, integral_points, micro_cfl_polytope, micro_grid, oracle_crosscheck, protection_matrix_search,
    ConeVector,
};
use liftgap::lp::{LinearProgram, Relation};
use liftgap::rational::{q, qi};

fn main() -> liftgap::Result<()> {
    let k = micro_cfl_polytope();
    let r = oracle_crosscheck(&k, &micro_grid(2))?;
    println!("{} grid points: {} in K, {} survive one round, agree: {}", r.points, r.in_k, r.members, r.all_agree);
    let verts = integral_points(&k)?;
    let survive = verts.iter().filter(|v| brute_membership(&k, v, 2).unwrap_or(false)).count();
    println!("{survive} of {} integral vertices survive two rounds", verts.len());

    // Pairwise edge constraints of a triangle: one round cuts the center.
    let mut tri = LinearProgram::new();
    let v: Vec<usize> = (0..3).map(|i| tri.add_var_bounded(format!("x{i}"), Some(qi(0)), Some(qi(1)))).collect();
    for a in 0..3 {
        for b in a + 1..3 {
            tri.add_constraint(vec![(v[a], qi(1)), (v[b], qi(1))], Relation::Le, qi(1));
        }
    }
    let center = ConeVector::point(vec![q(1, 2); 3]);
    println!(
        "triangle center: in K {}, one round {}, protection matrix {}",
        brute_membership(&tri, &center, 0)?,
        brute_membership(&tri, &center, 1)?,
        protection_matrix_search(&tri, &center)?.exists
    );
    Ok(())
}
