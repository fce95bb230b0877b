//! Bad-solution constructions for proper relaxations: the lower-bounded
//! family with a gap linear in `n`, the capacitated family with a gap of
//! `n²`, the all-integral-solutions class set, and the four-facility example
//! separating star feasibility from a complexity-3/4 class set.

mod cfl;
mod example1;
mod lbfl;

#[cfg(test)]
mod tests;

use std::ops::Range;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{LabeledInstance, LbflLayout};
use crate::rational::{qu, serde_exact, Q};
use crate::relaxations::{complexity, constellation_lp, integral_class_set, project_constellation, Class, ClassSet};
use crate::solver::{integral_optimum, solve_lp, LpStatus, DEFAULT_SUBSET_BUDGET};

pub use cfl::{
    cfl_bad_projection, cfl_canonical_support, cfl_gap_report, cfl_round_measures, CflGapReport, CflProjection,
    CflSupport,
};
pub use example1::{example1_target, example1_types, example1_verify, Example1Report, Example1Type};
pub use lbfl::{
    enumerate_round_fractions, lbfl_bad_projection, lbfl_bound_brute_force, lbfl_class_counts, lbfl_gap_report, lbfl_round_fractions,
    EnumeratedRounds, LbflGapReport, LbflProjection, RoundFractions,
};

/// Client blocks of the lower-bounded construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExclusiveSets {
    pub n: usize,
    pub bound: usize,
    /// `exclusive[i]` for simplex facility `i`, each of size `B - 1`.
    pub exclusive: Vec<Range<usize>>,
    /// Shared block of the two far facilities, size `B + n - 1`.
    pub shared: Range<usize>,
    /// Client discarded from each simplex facility's integral block.
    pub discarded: Vec<usize>,
}

impl ExclusiveSets {
    pub fn new(n: usize) -> Self {
        let lay = LbflLayout::new(n);
        ExclusiveSets {
            n,
            bound: lay.bound,
            exclusive: lay.simplex_facilities().map(|i| lay.exclusive(i)).collect(),
            shared: lay.far_clients(),
            discarded: lay.simplex_facilities().map(|i| lay.discarded(i)).collect(),
        }
    }

    pub fn n_clients(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Simplex facility owning client `j`, or `None` for the shared block.
    pub fn owner(&self, j: usize) -> Option<usize> {
        self.exclusive.iter().position(|r| r.contains(&j))
    }

    /// Checks that the blocks partition the clients with the expected sizes.
    pub fn check(&self) -> Result<()> {
        let mut next = 0;
        for (i, r) in self.exclusive.iter().enumerate() {
            if r.start != next || r.len() != self.bound - 1 {
                return Err(Error::Construction(format!("exclusive block of facility {i} is {r:?}")));
            }
            next = r.end;
        }
        if self.shared.start != next || self.shared.end != self.n_clients() || self.shared.len() != self.bound + self.n - 1 {
            return Err(Error::Construction(format!("shared block is {:?}", self.shared)));
        }
        if self.discarded.iter().any(|j| !self.shared.contains(j)) {
            return Err(Error::Construction("discarded client outside the shared block".into()));
        }
        Ok(())
    }
}

/// Measures spent on the two rounds of a construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundMeasures {
    pub n: usize,
    pub c: usize,
    #[serde(with = "serde_exact")]
    pub phi: Q,
    #[serde(with = "serde_exact")]
    pub xi: Q,
}

impl RoundMeasures {
    /// Lower-bounded rounds: `phi = (n²+n-1)/n²` and
    /// `xi = ((n²-1)/n² - (n-c-1)/(n-1) phi) (n-1)/(n-c)`.
    pub fn lbfl(n: usize, c: usize) -> Result<Self> {
        check_nc(n, c)?;
        let (nq, cq) = (qu(n as u64), qu(c as u64));
        let n2 = &nq * &nq;
        let one = Q::one();
        let phi = (&n2 + &nq - &one) / &n2;
        let own_a = (&nq - &cq - &one) / (&nq - &one);
        let xi = ((&n2 - &one) / &n2 - own_a * &phi) * (&nq - &one) / (&nq - &cq);
        if !phi.is_positive() || !xi.is_positive() {
            return Err(Error::Construction(format!("nonpositive round measure at n={n}, c={c}")));
        }
        Ok(RoundMeasures { n, c, phi, xi })
    }
}

pub(crate) fn check_nc(n: usize, c: usize) -> Result<()> {
    if c < 2 || n < c + 2 {
        return Err(Error::InvalidParameter(format!(
            "need c >= 2 and n - c - 1 >= 1 (n={n}, c={c})"
        )));
    }
    Ok(())
}

/// Clients per non-special facility of `cl`.
pub fn class_density(cl: &Class, special: Option<usize>) -> Result<Q> {
    let others: Vec<usize> = cl.open.iter().copied().filter(|&i| Some(i) != special).collect();
    if others.is_empty() {
        return Err(Error::InvalidParameter("class has no non-special facility".into()));
    }
    let assigned = cl.assignments.iter().filter(|(i, _)| Some(*i) != special).count();
    Ok(qu(assigned as u64) / qu(others.len() as u64))
}

/// Checks on the constellation LP over all integral solutions.
#[derive(Clone, Debug, Serialize)]
pub struct Gap1Report {
    pub classes: usize,
    #[serde(with = "serde_exact")]
    pub lp_optimum: Q,
    #[serde(with = "serde_exact")]
    pub integral_optimum: Q,
    pub gap_is_one: bool,
    /// Minimum and maximum of the total class mass over the feasible region.
    #[serde(with = "serde_exact")]
    pub min_mass: Q,
    #[serde(with = "serde_exact")]
    pub max_mass: Q,
    pub convex_combinations: bool,
    /// Whether the optimal vertex returned by the simplex is a single class.
    pub optimum_single_class: bool,
    /// Whether that vertex projects to a 0-1 `(y, x)`.
    pub optimum_projection_integral: bool,
    #[serde(with = "serde_exact")]
    pub complexity: Q,
    pub passed: bool,
}

/// Class set with one class per integral solution, with the accompanying
/// exactness checks.
pub fn theorem_gap1_classset(inst: &LabeledInstance, solution_budget: u128) -> Result<(ClassSet, Gap1Report)> {
    let base = &inst.base;
    let cs = integral_class_set(base, solution_budget)?;
    let lp = constellation_lp(base, &cs);
    let sol = solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Construction(format!("constellation LP status {:?}", sol.status)));
    }
    let lp_opt = sol.objective.clone().unwrap_or_default();
    let int_opt = integral_optimum(base, DEFAULT_SUBSET_BUDGET)?.cost;

    let mass: Vec<(usize, Q)> = (0..lp.num_vars()).map(|v| (v, Q::one())).collect();
    let mut lo = lp.clone();
    lo.set_objective(mass.clone());
    let mut hi = lp.clone();
    hi.set_objective(mass.into_iter().map(|(v, c)| (v, -c)).collect());
    let min_mass = solve_lp(&lo)?.objective.unwrap_or_default();
    let max_mass = -solve_lp(&hi)?.objective.unwrap_or_default();

    let support: Vec<&Q> = sol.values.iter().filter(|v| !v.is_zero()).collect();
    let single = support.len() == 1 && support[0].is_one();
    let proj = project_constellation(base, &cs, &sol.values)?;
    let integral = proj
        .y
        .iter()
        .chain(proj.x.iter().flatten())
        .all(|v| v.is_zero() || v.is_one());
    let alpha = complexity(&cs, base)?;

    let convex = min_mass.is_one() && max_mass.is_one();
    let gap_is_one = lp_opt == int_opt;
    let report = Gap1Report {
        classes: cs.len(),
        lp_optimum: lp_opt,
        integral_optimum: int_opt,
        gap_is_one,
        min_mass,
        max_mass,
        convex_combinations: convex,
        optimum_single_class: single,
        optimum_projection_integral: integral,
        passed: gap_is_one && convex && single && integral && alpha.is_one(),
        complexity: alpha,
    };
    Ok((cs, report))
}
