//! Witness tree of the LS instance: every node is checked for feasibility,
//! the invariants, twin identities and witness symmetry.

use liftgap::instances::build_ls_instance;
use liftgap::rational::{fmt_q, qi};
use liftgap::witnesses::{build_tree, root_solution, LsParams, Strategy};

fn main() -> liftgap::Result<()> {
    let inst = build_ls_instance(20, 20, &qi(10))?;
    let p = LsParams::from_instance(&inst)?;
    let root = root_solution(&inst)?;
    println!(
        "n={} l={} a={} b={} root cost {} depth cap {}",
        p.n,
        p.l,
        fmt_q(&p.a),
        fmt_q(&p.b),
        fmt_q(&root.cost(&inst)),
        p.depth_cap()
    );
    for (depth, s) in [
        (1, Strategy::AllChildrenPerNode),
        (2, Strategy::RandomSample { seed: 1, width: 4 }),
    ] {
        let t = build_tree(&root, &p, depth, &s)?;
        println!(
            "{} depth {depth}: {} nodes, {} witness families, all passed: {}",
            s.name(),
            t.node_count,
            t.witness_families_checked,
            t.all_passed
        );
    }
    Ok(())
}
