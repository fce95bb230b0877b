//! Evolution trees: witness families per node, checked on a restricted set of
//! coordinates, and the greedy zeroing path.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    touch_case, touch_uncapped, twin_identity, verify_invariants, verify_node_feasibility, Case, InvariantReport, LsParams,
    Members, NodeFeasibility, OrbitSolution, Var, WitnessType,
};
use crate::error::{budget, Error, Result};
use crate::ls_hierarchy::{protection_matrix_check, symmetry_factor_check, CheckReport, ConeVector, ProtectionMatrixView, WitnessPair};
use crate::rational::{serde_q, Q};

/// Coordinates on which a node's witness family is compared: every `y`,
/// and `x` for up to two clients of each orbit. Two clients per orbit are
/// enough to see both the touched client and an untouched orbit mate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Frame {
    pub facilities: usize,
    pub clients: Vec<usize>,
}

impl Frame {
    pub fn of(node: &OrbitSolution) -> Self {
        let mut clients = Vec::new();
        for o in &node.x_orbits {
            match o.members {
                Members::Client(c) => clients.push(c),
                Members::Rest => clients.extend(node.rest_members(2)),
            }
        }
        Frame {
            facilities: node.facilities(),
            clients,
        }
    }

    pub fn dim(&self) -> usize {
        self.facilities * (1 + self.clients.len())
    }

    pub fn var(&self, k: usize) -> Var {
        let f = self.facilities;
        if k < f {
            Var::Y(k)
        } else {
            Var::X((k - f) % f, self.clients[(k - f) / f])
        }
    }

    pub fn restrict(&self, sol: &OrbitSolution) -> Result<ConeVector> {
        let mut coords = sol.y.clone();
        for &c in &self.clients {
            let o = sol.orbit_of(c)?;
            coords.extend(sol.x_orbits[o].profile.iter().cloned());
        }
        Ok(ConeVector::point(coords))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessFamilyReport {
    pub coordinates: usize,
    pub twin_identity: bool,
    pub twin_failures: Vec<String>,
    pub children_feasible: bool,
    pub infeasible_children: Vec<String>,
    pub symmetry: CheckReport,
    pub protection: CheckReport,
    pub passed: bool,
}

/// Builds both witnesses of every frame coordinate of `node` and checks the
/// twin identity, feasibility of every child, witness factor symmetry, and
/// the one-round protection-matrix conditions with child feasibility as the
/// previous-level oracle.
pub fn check_witness_family(node: &OrbitSolution, p: &LsParams) -> Result<WitnessFamilyReport> {
    let frame = Frame::of(node);
    let z = frame.restrict(node)?;
    let mut pairs = Vec::with_capacity(frame.dim());
    let mut type1 = BTreeMap::new();
    let mut verdicts: BTreeMap<Vec<Q>, bool> = BTreeMap::new();
    let mut twin_failures = Vec::new();
    let mut infeasible = Vec::new();
    for k in 0..frame.dim() {
        let var = frame.var(k);
        let v = &z.coords[k];
        let mut kids: [Option<OrbitSolution>; 2] = [None, None];
        for (slot, wt, defined) in [(0, WitnessType::Type1, !v.is_zero()), (1, WitnessType::Type2, !v.is_one())] {
            if !defined {
                continue;
            }
            let child = touch_uncapped(node, p, var, wt)?;
            let feas = verify_node_feasibility(&child, p);
            if !feas.feasible {
                infeasible.push(format!("{var} {wt:?}"));
            }
            verdicts.insert(frame.restrict(&child)?.coords, feas.feasible);
            kids[slot] = Some(child);
        }
        if let [Some(a), Some(b)] = &kids {
            if !twin_identity(node, var, a, b)? {
                twin_failures.push(var.to_string());
            }
        }
        let w1 = kids[0].as_ref().map(|c| frame.restrict(c)).transpose()?;
        let w2 = kids[1].as_ref().map(|c| frame.restrict(c)).transpose()?;
        if let Some(w) = &w1 {
            type1.insert(k, w.clone());
        }
        pairs.push(WitnessPair {
            variable: k,
            type1: w1,
            type2: w2,
        });
    }
    let symmetry = symmetry_factor_check(&z, &pairs)?;
    let view = ProtectionMatrixView::from_type1(z, &type1);
    let oracle = |w: &ConeVector| Ok(w.z0.is_one() && verdicts.get(&w.coords).copied().unwrap_or(false));
    let protection = protection_matrix_check(&view, &oracle)?;
    let passed = twin_failures.is_empty() && infeasible.is_empty() && symmetry.passed && protection.passed;
    Ok(WitnessFamilyReport {
        coordinates: frame.dim(),
        twin_identity: twin_failures.is_empty(),
        twin_failures,
        children_feasible: infeasible.is_empty(),
        infeasible_children: infeasible,
        symmetry,
        protection,
        passed,
    })
}

/// One representative touch per client orbit, facility and witness type,
/// plus both touches of every fractional Costly `y`. Integral coordinates
/// are skipped since their children equal the node.
pub fn representative_touches(node: &OrbitSolution, p: &LsParams) -> Vec<(Var, WitnessType)> {
    let both = [WitnessType::Type1, WitnessType::Type2];
    let frac = |v: &Q| !v.is_zero() && !v.is_one();
    let mut out = Vec::new();
    for i in p.costly() {
        if frac(&node.y[i]) {
            out.extend(both.iter().map(|&w| (Var::Y(i), w)));
        }
    }
    for (k, rep) in node.representatives() {
        for (i, x) in node.x_orbits[k].profile.iter().enumerate() {
            if frac(x) {
                out.extend(both.iter().map(|&w| (Var::X(i, rep), w)));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub enum Strategy {
    AllChildrenPerNode,
    Paths(Vec<Vec<(Var, WitnessType)>>),
    RandomSample { seed: u64, width: usize },
}

impl Strategy {
    pub fn name(&self) -> String {
        match self {
            Strategy::AllChildrenPerNode => "all-children".into(),
            Strategy::Paths(p) => format!("paths({})", p.len()),
            Strategy::RandomSample { seed, width } => format!("random(seed={seed}, width={width})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeNodeReport {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    pub touched_history: Vec<(Var, WitnessType)>,
    pub case: Option<Case>,
    pub feasibility: NodeFeasibility,
    pub invariants: Option<InvariantReport>,
    pub witnesses: Option<WitnessFamilyReport>,
    #[serde(with = "serde_q")]
    pub cost: Q,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TreeReport {
    pub strategy: String,
    pub max_depth: usize,
    pub node_count: usize,
    pub witness_families_checked: usize,
    pub failures: usize,
    pub first_failure: Option<usize>,
    pub deepest_feasible: usize,
    pub all_passed: bool,
    pub nodes: Vec<TreeNodeReport>,
}

#[derive(Clone, Debug)]
pub struct TreeOptions {
    /// Check the witness family of every node that gets children.
    pub witness_checks: bool,
    pub node_budget: usize,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            witness_checks: true,
            node_budget: 250_000,
        }
    }
}

struct Builder<'a> {
    p: &'a LsParams,
    opts: TreeOptions,
    nodes: Vec<TreeNodeReport>,
    families: usize,
}

impl Builder<'_> {
    /// Verifies `node` in the order feasibility, invariants, witness family,
    /// stopping at the first failure. Returns the node id.
    fn visit(&mut self, node: &OrbitSolution, parent: Option<usize>, case: Option<Case>, expand: bool) -> Result<usize> {
        if self.nodes.len() >= self.opts.node_budget {
            return Err(budget("evolution tree nodes", self.nodes.len() as u128 + 1, self.opts.node_budget as u128));
        }
        let feasibility = verify_node_feasibility(node, self.p);
        let mut rec = TreeNodeReport {
            id: self.nodes.len(),
            parent,
            depth: node.depth,
            touched_history: node.touched_history.clone(),
            case,
            cost: node.y[self.p.n..].iter().sum(),
            passed: false,
            failure: None,
            feasibility,
            invariants: None,
            witnesses: None,
        };
        if !rec.feasibility.feasible {
            rec.failure = Some(format!("infeasible: {}", rec.feasibility.violations[0].constraint));
        } else {
            let inv = verify_invariants(node, self.p);
            if !inv.all_hold {
                rec.failure = Some(format!("invariants: {}", inv.failures().join("; ")));
            }
            rec.invariants = Some(inv);
            if rec.failure.is_none() && expand && self.opts.witness_checks {
                let fam = check_witness_family(node, self.p)?;
                self.families += 1;
                if !fam.passed {
                    rec.failure = Some("witness family check failed".into());
                }
                rec.witnesses = Some(fam);
            }
        }
        rec.passed = rec.failure.is_none();
        let id = rec.id;
        self.nodes.push(rec);
        Ok(id)
    }

    fn grow(&mut self, node: &OrbitSolution, id: usize, depth: usize, pick: &mut dyn FnMut(Vec<(Var, WitnessType)>) -> Vec<(Var, WitnessType)>) -> Result<()> {
        if node.depth >= depth || !self.nodes[id].passed {
            return Ok(());
        }
        for (var, wt) in pick(representative_touches(node, self.p)) {
            let (child, case) = touch_case(node, self.p, var, wt)?;
            let expand = child.depth < depth;
            let cid = self.visit(&child, Some(id), Some(case), expand)?;
            self.grow(&child, cid, depth, pick)?;
        }
        Ok(())
    }

    fn finish(self, strategy: &Strategy, max_depth: usize) -> TreeReport {
        let failures = self.nodes.iter().filter(|n| !n.passed).count();
        let first_failure = self.nodes.iter().position(|n| !n.passed);
        let deepest_feasible = self
            .nodes
            .iter()
            .filter(|n| n.feasibility.feasible)
            .map(|n| n.depth)
            .max()
            .unwrap_or(0);
        TreeReport {
            strategy: strategy.name(),
            max_depth,
            node_count: self.nodes.len(),
            witness_families_checked: self.families,
            failures,
            first_failure,
            deepest_feasible,
            all_passed: failures == 0,
            nodes: self.nodes,
        }
    }
}

/// Builds and verifies an evolution tree below `root`. Tree strategies are
/// limited to the depth cap of the survival guarantee; explicit paths may go
/// deeper and simply report where they fail.
pub fn build_tree(root: &OrbitSolution, p: &LsParams, depth: usize, strategy: &Strategy) -> Result<TreeReport> {
    build_tree_with(root, p, depth, strategy, TreeOptions::default())
}

pub fn build_tree_with(root: &OrbitSolution, p: &LsParams, depth: usize, strategy: &Strategy, opts: TreeOptions) -> Result<TreeReport> {
    let mut b = Builder {
        p,
        opts,
        nodes: Vec::new(),
        families: 0,
    };
    match strategy {
        Strategy::Paths(paths) => {
            let longest = paths.iter().map(Vec::len).max().unwrap_or(0);
            let root_id = b.visit(root, None, None, longest > 0)?;
            for path in paths {
                let (mut node, mut id) = (root.clone(), root_id);
                for (s, &(var, wt)) in path.iter().enumerate() {
                    if !b.nodes[id].passed {
                        break;
                    }
                    let (child, case) = touch_case(&node, p, var, wt)?;
                    id = b.visit(&child, Some(id), Some(case), s + 1 < path.len())?;
                    node = child;
                }
            }
            Ok(b.finish(strategy, longest))
        }
        Strategy::AllChildrenPerNode | Strategy::RandomSample { .. } => {
            if depth > p.depth_cap() {
                return Err(budget("witness tree depth", depth as u128, p.depth_cap() as u128));
            }
            let root_id = b.visit(root, None, None, depth > root.depth)?;
            match strategy {
                Strategy::RandomSample { seed, width } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    let w = *width;
                    let mut pick = move |all: Vec<(Var, WitnessType)>| {
                        let mut all = all;
                        all.shuffle(&mut rng);
                        all.truncate(w);
                        all
                    };
                    b.grow(root, root_id, depth, &mut pick)?;
                }
                _ => b.grow(root, root_id, depth, &mut |all| all)?,
            }
            Ok(b.finish(strategy, depth))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroingStep {
    pub step: usize,
    pub touched: Var,
    #[serde(with = "serde_q")]
    pub value: Q,
    /// Every remaining variable of the set grew by at most `1 + z/(1 - z)`.
    pub growth_bound_holds: bool,
    pub feasible: bool,
    pub violated: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroingPath {
    pub steps: Vec<ZeroingStep>,
    pub all_zeroed: bool,
    pub first_infeasible: Option<usize>,
    #[serde(skip)]
    pub nodes: Vec<OrbitSolution>,
}

/// Greedy path that repeatedly touches the largest remaining variable of
/// `set` as type 2, until every variable of `set` is zero.
pub fn zeroing_path(node: &OrbitSolution, p: &LsParams, set: &[Var]) -> Result<ZeroingPath> {
    let mut total = Q::zero();
    for &v in set {
        total += node.value(v)?;
    }
    if total >= Q::one() {
        return Err(Error::InvalidParameter("the selected variables must sum to less than 1".into()));
    }
    let mut remaining: Vec<Var> = set.to_vec();
    let mut cur = node.clone();
    let mut out = ZeroingPath {
        steps: Vec::new(),
        all_zeroed: false,
        first_infeasible: None,
        nodes: vec![node.clone()],
    };
    while !remaining.is_empty() {
        let values = remaining.iter().map(|&v| cur.value(v)).collect::<Result<Vec<_>>>()?;
        let best = (0..remaining.len())
            .max_by(|&a, &b| values[a].cmp(&values[b]).then(b.cmp(&a)))
            .expect("remaining is nonempty");
        let var = remaining.remove(best);
        let zj = values[best].clone();
        let next = touch_uncapped(&cur, p, var, WitnessType::Type2)?;
        let growth = if zj.is_one() {
            false
        } else {
            let factor = Q::one() + &zj / (Q::one() - &zj);
            remaining.iter().all(|&v| {
                let before = cur.value(v).expect("checked above");
                next.value(v).is_ok_and(|after| after <= &before * &factor)
            })
        };
        let feas = verify_node_feasibility(&next, p);
        let step = out.steps.len() + 1;
        if !feas.feasible && out.first_infeasible.is_none() {
            out.first_infeasible = Some(step);
        }
        out.steps.push(ZeroingStep {
            step,
            touched: var,
            value: zj,
            growth_bound_holds: growth,
            feasible: feas.feasible,
            violated: feas.violations.iter().map(|v| format!("{} at {}", v.constraint, v.at)).collect(),
        });
        out.nodes.push(next.clone());
        cur = next;
    }
    out.all_zeroed = set.iter().all(|&v| cur.value(v).is_ok_and(|x| x.is_zero()));
    Ok(out)
}
