//! Exact LP solving, feasibility checks, brute-force integral optima and
//! integrality gaps.

pub mod flow;
pub mod simplex;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{budget, Error, Result};
use crate::instances::{FacilityLocationInstance, Mode};
use crate::lp::{violations, LinearProgram, Violation};
use crate::rational::{fmt_q, ExactValue, Q};

pub use simplex::{dual_bound, infeasibility_bound, Scalar, FAST_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Use `f64` arithmetic with tolerance [`FAST_TOL`]. Results are not
    /// certified.
    pub fast: bool,
    /// Upper bound on dense tableau cells.
    pub max_cells: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            fast: false,
            max_cells: 4_000_000,
        }
    }
}

impl SolveOptions {
    /// Derives the cell budget from a memory cap in megabytes.
    pub fn with_memory_mb(mb: u64) -> Self {
        SolveOptions {
            fast: false,
            max_cells: (mb as u128) * 1024 * 1024 / 64,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    pub names: Vec<String>,
    pub values: Vec<Q>,
    pub objective: Option<Q>,
    /// Constraint multipliers: an optimality certificate when optimal, a
    /// Farkas certificate when infeasible, empty when unbounded.
    pub duals: Vec<Q>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn value(&self, name: &str) -> Option<&Q> {
        self.names.iter().position(|n| n == name).map(|i| &self.values[i])
    }

    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn to_json(&self) -> serde_json::Value {
        let values: BTreeMap<&str, String> = self
            .names
            .iter()
            .zip(&self.values)
            .map(|(n, v)| (n.as_str(), fmt_q(v)))
            .collect();
        serde_json::json!({
            "status": self.status,
            "objective_value": self.objective.as_ref().map(ExactValue::from),
            "values": values,
            "duals": self.duals.iter().map(fmt_q).collect::<Vec<_>>(),
        })
    }
}

/// Exact solve with default options.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    solve_lp_with(lp, SolveOptions::default())
}

/// Solves `lp`. In exact mode every optimal answer is re-verified: the point
/// must satisfy each constraint and the dual multipliers must certify the
/// objective value.
pub fn solve_lp_with(lp: &LinearProgram, opts: SolveOptions) -> Result<LpSolution> {
    let raw = if opts.fast {
        simplex::simplex::<f64>(lp, opts.max_cells)?
    } else {
        simplex::simplex::<Q>(lp, opts.max_cells)?
    };
    let status = match raw.status {
        simplex::RawStatus::Optimal => LpStatus::Optimal,
        simplex::RawStatus::Infeasible => LpStatus::Infeasible,
        simplex::RawStatus::Unbounded => LpStatus::Unbounded,
    };
    let objective = (status == LpStatus::Optimal).then(|| lp.objective_at(&raw.values));
    let sol = LpSolution {
        status,
        names: lp.variables.iter().map(|v| v.name.clone()).collect(),
        values: raw.values,
        objective,
        duals: raw.duals,
        pivots: raw.pivots,
    };
    if !opts.fast {
        certify(lp, &sol)?;
    }
    Ok(sol)
}

fn certify(lp: &LinearProgram, sol: &LpSolution) -> Result<()> {
    let fail = |what: &str| Err(Error::Construction(format!("simplex certificate check failed: {what}")));
    match sol.status {
        LpStatus::Optimal => {
            if !violations(lp, &sol.values)?.is_empty() {
                return fail("primal point infeasible");
            }
            if dual_bound(lp, &sol.duals).as_ref() != sol.objective.as_ref() {
                return fail("dual bound differs from objective");
            }
        }
        LpStatus::Infeasible => {
            if infeasibility_bound(lp, &sol.duals).is_none() {
                return fail("Farkas certificate invalid");
            }
        }
        LpStatus::Unbounded => {}
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

/// Exact check of a dense point (ordered like `lp.variables`).
pub fn check_feasible(point: &[Q], lp: &LinearProgram) -> Result<FeasibilityReport> {
    let violations = violations(lp, point)?;
    Ok(FeasibilityReport {
        feasible: violations.is_empty(),
        violations,
    })
}

/// Exact check of a point given by variable name. Unnamed variables are an
/// error.
pub fn check_feasible_named(point: &BTreeMap<String, Q>, lp: &LinearProgram) -> Result<FeasibilityReport> {
    let dense = lp
        .variables
        .iter()
        .map(|v| point.get(&v.name).cloned().ok_or_else(|| Error::MissingVariable(v.name.clone())))
        .collect::<Result<Vec<_>>>()?;
    check_feasible(&dense, lp)
}

/// An integral solution: open facilities and the facility serving each client.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralSolution {
    pub open: Vec<usize>,
    pub assignment: Vec<usize>,
    pub cost: Q,
}

impl IntegralSolution {
    pub fn evaluate(inst: &FacilityLocationInstance, open: Vec<usize>, assignment: Vec<usize>) -> Self {
        let mut cost: Q = open.iter().map(|&i| inst.opening_cost[i].clone()).sum();
        for (j, &i) in assignment.iter().enumerate() {
            cost += inst.cost(i, j);
        }
        IntegralSolution { open, assignment, cost }
    }

    /// Checks capacities or lower bounds and that every client is served by an
    /// open facility.
    pub fn is_feasible(&self, inst: &FacilityLocationInstance) -> bool {
        if self.assignment.len() != inst.n_clients {
            return false;
        }
        let mut load = vec![0u64; inst.n_facilities];
        for &i in &self.assignment {
            if !self.open.contains(&i) {
                return false;
            }
            load[i] += 1;
        }
        let u = inst.capacity_or_bound;
        self.open.iter().all(|&i| match inst.mode {
            Mode::Cfl => load[i] <= u,
            Mode::Lbfl => load[i] >= u,
        })
    }
}

/// Subset budget used when no explicit budget is given.
pub const DEFAULT_SUBSET_BUDGET: u128 = 1 << 20;

/// Minimum-cost assignment for a fixed open set, or `None` if none exists.
pub fn best_assignment(inst: &FacilityLocationInstance, open: &[usize]) -> Option<IntegralSolution> {
    let m = inst.n_clients;
    let k = open.len();
    let u = inst.capacity_or_bound as i64;
    match inst.mode {
        Mode::Cfl if (k as i64) * u < m as i64 => return None,
        Mode::Lbfl if (k as i64) * u > m as i64 => return None,
        _ => {}
    }
    // source, clients, open facilities, sink
    let s = 0;
    let t = m + k + 1;
    let mut g = flow::MinCostFlow::new(m + k + 2);
    let mut arcs = Vec::with_capacity(m * k);
    for j in 0..m {
        g.add_edge(s, 1 + j, 1, Q::zero());
        for (p, &i) in open.iter().enumerate() {
            arcs.push((j, i, g.add_edge(1 + j, 1 + m + p, 1, inst.cost(i, j).clone())));
        }
    }
    let mut forced = Vec::new();
    match inst.mode {
        Mode::Cfl => {
            for p in 0..k {
                g.add_edge(1 + m + p, t, u, Q::zero());
            }
        }
        Mode::Lbfl => {
            // A discount larger than any assignment cost makes the lower-bound
            // arcs fill first whenever that is possible.
            let big: Q = Q::one()
                + (0..m)
                    .map(|j| open.iter().map(|&i| inst.cost(i, j).clone()).max().unwrap_or_default())
                    .sum::<Q>();
            for p in 0..k {
                forced.push(g.add_edge(1 + m + p, t, u, -big.clone()));
                g.add_edge(1 + m + p, t, m as i64, Q::zero());
            }
        }
    }
    let (pushed, _) = g.run(s, t, m as i64);
    if pushed < m as i64 || forced.iter().any(|&e| g.flow(e) < u) {
        return None;
    }
    let mut assignment = vec![usize::MAX; m];
    for (j, i, e) in arcs {
        if g.flow(e) > 0 {
            assignment[j] = i;
        }
    }
    let sol = IntegralSolution::evaluate(inst, open.to_vec(), assignment);
    debug_assert!(sol.is_feasible(inst));
    Some(sol)
}

/// Exact integral optimum. Zero-distance instances use the counting formula;
/// otherwise every facility subset is tried with a min-cost-flow assignment.
pub fn integral_optimum(inst: &FacilityLocationInstance, subset_budget: u128) -> Result<IntegralSolution> {
    if !inst.integrally_feasible() {
        return Err(Error::InfeasibleInput("instance has no integral solution".into()));
    }
    if inst.connection_cost.is_all_zero() {
        return Ok(zero_distance_optimum(inst));
    }
    let n = inst.n_facilities;
    let subsets = 1u128.checked_shl(n as u32).unwrap_or(u128::MAX);
    if subsets > subset_budget {
        return Err(budget("facility subsets", subsets, subset_budget));
    }
    let mut best: Option<IntegralSolution> = None;
    for mask in 1u64..(1u64 << n) {
        let open: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let opening: Q = open.iter().map(|&i| inst.opening_cost[i].clone()).sum();
        if best.as_ref().is_some_and(|b| opening >= b.cost) {
            continue;
        }
        if let Some(sol) = best_assignment(inst, &open) {
            if best.as_ref().is_none_or(|b| sol.cost < b.cost) {
                best = Some(sol);
            }
        }
    }
    best.ok_or_else(|| Error::InfeasibleInput("no facility subset admits an assignment".into()))
}

fn zero_distance_optimum(inst: &FacilityLocationInstance) -> IntegralSolution {
    let m = inst.n_clients;
    let u = inst.capacity_or_bound as usize;
    let mut order: Vec<usize> = (0..inst.n_facilities).collect();
    order.sort_by(|a, b| inst.opening_cost[*a].cmp(&inst.opening_cost[*b]).then(a.cmp(b)));
    let k = match inst.mode {
        Mode::Cfl => m.div_ceil(u),
        Mode::Lbfl => 1,
    };
    let mut open: Vec<usize> = order[..k].to_vec();
    open.sort_unstable();
    let assignment = match inst.mode {
        Mode::Cfl => (0..m).map(|j| open[j / u]).collect(),
        Mode::Lbfl => vec![open[0]; m],
    };
    IntegralSolution::evaluate(inst, open, assignment)
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub lp_kind: String,
    pub lp_value: ExactValue,
    pub integral_value: Option<ExactValue>,
    /// `integral / lp`; absent when either side is missing or infinite.
    pub gap: Option<ExactValue>,
    pub infinite: bool,
    pub integral_skipped: Option<String>,
    pub certificate: Option<BTreeMap<String, String>>,
}

impl GapReport {
    pub fn new(lp_kind: impl Into<String>, lp_value: &Q, integral_value: Option<&Q>) -> Self {
        let (gap, infinite) = match integral_value {
            Some(iv) if lp_value.is_zero() => (None, iv > lp_value),
            Some(iv) => (Some(ExactValue::from(&(iv / lp_value))), false),
            None => (None, false),
        };
        GapReport {
            lp_kind: lp_kind.into(),
            lp_value: lp_value.into(),
            integral_value: integral_value.map(ExactValue::from),
            gap,
            infinite,
            integral_skipped: None,
            certificate: None,
        }
    }

    pub fn gap_value(&self) -> Option<&Q> {
        self.gap.as_ref().map(|g| &g.exact)
    }

    pub fn with_certificate(mut self, names: &[String], values: &[Q]) -> Self {
        self.certificate = Some(
            names
                .iter()
                .zip(values)
                .filter(|(_, v)| !v.is_zero())
                .map(|(n, v)| (n.clone(), fmt_q(v)))
                .collect(),
        );
        self
    }
}

/// Solves `lp`, computes the integral optimum and reports the ratio. A budget
/// error on the integral side is reported as skipped rather than propagated.
pub fn integrality_gap(
    inst: &FacilityLocationInstance,
    lp: &LinearProgram,
    lp_kind: &str,
    opts: SolveOptions,
    subset_budget: u128,
) -> Result<GapReport> {
    let sol = solve_lp_with(lp, opts)?;
    let lp_value = match sol.status {
        LpStatus::Optimal => sol.objective.clone().unwrap_or_default(),
        LpStatus::Infeasible => return Err(Error::InfeasibleInput("relaxation is infeasible".into())),
        LpStatus::Unbounded => return Err(Error::MalformedLp("relaxation is unbounded".into())),
    };
    match integral_optimum(inst, subset_budget) {
        Ok(int) => Ok(GapReport::new(lp_kind, &lp_value, Some(&int.cost)).with_certificate(&sol.names, &sol.values)),
        Err(Error::BudgetExceeded { what, required, budget }) => {
            let mut r = GapReport::new(lp_kind, &lp_value, None).with_certificate(&sol.names, &sol.values);
            r.integral_skipped = Some(format!("{what}: needs {required}, budget {budget}"));
            Ok(r)
        }
        Err(e) => Err(e),
    }
}

/// Lower bound on the integral optimum of a zero-distance CFL instance:
/// any feasible solution opens at least `ceil(m / U)` facilities.
pub fn zero_distance_cfl_bound(inst: &FacilityLocationInstance) -> Option<Q> {
    if inst.mode != Mode::Cfl || !inst.connection_cost.is_all_zero() {
        return None;
    }
    let k = inst.n_clients.div_ceil(inst.capacity_or_bound as usize);
    let mut costs = inst.opening_cost.clone();
    costs.sort();
    (k <= costs.len()).then(|| costs[..k].iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::ConnectionCosts;
    use crate::lp::Relation;
    use crate::rational::{q, qi};

    #[test]
    fn one_variable_lower_bound() {
        let mut lp = LinearProgram::new();
        let y = lp.add_var("y");
        lp.add_constraint(vec![(y, qi(1))], Relation::Ge, q(1, 3));
        lp.set_objective(vec![(y, qi(1))]);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.objective, Some(q(1, 3)));
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::new();
        let y = lp.add_var_bounded("y", Some(qi(0)), Some(qi(1)));
        lp.add_constraint(vec![(y, qi(1))], Relation::Ge, qi(2));
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new();
        let y = lp.add_var_bounded("y", None, None);
        lp.set_objective(vec![(y, qi(1))]);
        lp.add_constraint(vec![(y, qi(1))], Relation::Le, qi(4));
        assert_eq!(solve_lp(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_and_mirrored_variables() {
        let mut lp = LinearProgram::new();
        let a = lp.add_var_bounded("a", None, None);
        let b = lp.add_var_bounded("b", None, Some(qi(3)));
        lp.add_constraint(vec![(a, qi(1)), (b, qi(1))], Relation::Eq, qi(-2));
        lp.add_constraint(vec![(a, qi(1))], Relation::Ge, qi(-7));
        lp.set_objective(vec![(a, qi(2)), (b, qi(1))]);
        let s = solve_lp(&lp).unwrap();
        assert_eq!(s.values, vec![qi(-5), qi(3)]);
        assert_eq!(s.objective, Some(qi(-7)));
    }

    #[test]
    fn fast_mode_agrees_on_small_lp() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x");
        let y = lp.add_var("y");
        lp.add_constraint(vec![(x, qi(1)), (y, qi(2))], Relation::Ge, qi(3));
        lp.add_constraint(vec![(x, qi(3)), (y, qi(1))], Relation::Ge, qi(4));
        lp.set_objective(vec![(x, qi(1)), (y, qi(1))]);
        let exact = solve_lp(&lp).unwrap().objective.unwrap();
        let fast = solve_lp_with(&lp, SolveOptions { fast: true, ..Default::default() }).unwrap();
        let diff = crate::rational::to_f64(&(fast.objective.unwrap() - &exact)).abs();
        assert!(diff < 1e-9);
        assert_eq!(exact, qi(2));
    }

    #[test]
    fn single_facility_single_client() {
        let mut costs = ConnectionCosts::uniform(qi(0));
        costs.set(0, 0, qi(2));
        let inst = FacilityLocationInstance {
            mode: Mode::Cfl,
            n_facilities: 1,
            n_clients: 1,
            opening_cost: vec![qi(3)],
            connection_cost: costs,
            capacity_or_bound: 1,
            metric: true,
        };
        assert_eq!(integral_optimum(&inst, DEFAULT_SUBSET_BUDGET).unwrap().cost, qi(5));
    }

    #[test]
    fn lower_bounds_force_grouping() {
        // Two facilities at distance 1 from every client; B = 2 with 3 clients
        // forces a single open facility.
        let inst = FacilityLocationInstance {
            mode: Mode::Lbfl,
            n_facilities: 2,
            n_clients: 3,
            opening_cost: vec![qi(1), qi(1)],
            connection_cost: ConnectionCosts::uniform(qi(1)),
            capacity_or_bound: 2,
            metric: true,
        };
        let sol = integral_optimum(&inst, DEFAULT_SUBSET_BUDGET).unwrap();
        assert_eq!(sol.cost, qi(4));
        assert_eq!(sol.open.len(), 1);
        assert!(best_assignment(&inst, &[0, 1]).is_none());
    }

    #[test]
    fn gap_report_marks_infinite() {
        let r = GapReport::new("classic", &qi(0), Some(&qi(1)));
        assert!(r.infinite);
        let r = GapReport::new("classic", &q(1, 25), Some(&qi(1)));
        assert_eq!(r.gap_value(), Some(&qi(25)));
    }
}
