//! Four-facility lower-bounded example: a star-feasible solution that no
//! weighting of a complexity-3/4 class set can reproduce.
//!
//! The class set (integral solutions with at most three facilities, plus the
//! three-facility restrictions of four-facility solutions) is invariant under
//! permuting clients inside each group, and so is the target. Averaging any
//! feasible weighting over that group keeps it feasible, so it suffices to
//! weight orbits. An orbit is fixed by its open set and, per facility, the
//! number of clients it takes from each group. Classes using a pair with zero
//! target value must have zero weight and are left out.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instances::{build_example1_instance, example1_groups, LabeledInstance};
use crate::lp::{LinearProgram, Relation};
use crate::rational::{q, qi, qu, serde_exact, Q};
use crate::relaxations::{classic_to_star, complexity, projection_lp, star_marginals, Class, ClassSet, YxSolution};
use crate::solver::{dual_bound, infeasibility_bound, solve_lp, LpStatus};

const GROUPS: usize = 4;
const FACILITIES: usize = 4;

/// One client-permutation orbit of classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Example1Type {
    pub open: Vec<usize>,
    /// `counts[i][k]`: clients of group `k` assigned to facility `i`.
    pub counts: [[u32; GROUPS]; FACILITIES],
    /// `true` for a full integral solution, `false` for a restriction.
    pub full: bool,
}

impl Example1Type {
    fn load(&self, i: usize) -> u32 {
        self.counts[i].iter().sum()
    }

    /// A concrete class of the orbit: lowest-index clients of each group.
    pub fn representative(&self) -> Class {
        let groups = example1_groups();
        let mut next: Vec<usize> = groups.iter().map(|g| g.start).collect();
        let mut assigns = Vec::new();
        for &i in &self.open {
            for (k, nk) in next.iter_mut().enumerate() {
                for _ in 0..self.counts[i][k] {
                    assigns.push((i, *nk));
                    *nk += 1;
                }
            }
        }
        Class::new(self.open.clone(), assigns)
    }

    /// Number of classes in the orbit.
    pub fn orbit_size(&self) -> u128 {
        let groups = example1_groups();
        let mut total: u128 = 1;
        for (k, g) in groups.iter().enumerate() {
            let mut left = g.len() as u128;
            for i in 0..FACILITIES {
                let c = self.counts[i][k] as u128;
                total = total.saturating_mul(binom(left, c));
                left -= c;
            }
        }
        total
    }
}

fn binom(n: u128, k: u128) -> u128 {
    (0..k.min(n - k)).fold(1u128, |r, t| r.saturating_mul(n - t) / (t + 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct Example1Report {
    /// Stars produced by strip packing of the target.
    pub stars: usize,
    pub stars_admissible: bool,
    pub star_marginals_match: bool,
    /// Exact feasibility of the star LP with projection onto the target.
    pub star_feasible: bool,
    pub orbit_types: usize,
    pub classes_represented: String,
    #[serde(with = "serde_exact")]
    pub class_set_complexity: Q,
    /// Exact feasibility of the orbit-reduced projection LP.
    pub constellation_feasible: bool,
    /// Positive value certifying infeasibility.
    #[serde(with = "crate::rational::serde_q_opt")]
    pub farkas_bound: Option<Q>,
    /// Least measure of classes containing facility 3 or 4, with its dual bound.
    #[serde(with = "serde_exact")]
    pub far_measure_lower_bound: Q,
    pub far_measure_certified: bool,
    /// Every orbit contains at most one of facilities 3, 4 and both 1, 2.
    pub orbits_contain_first_two: bool,
    pub passed: bool,
}

/// The target: facilities 1, 2 integral on groups S1, S2; facilities 3, 4 at
/// 9/10, each taking its own group at 9/10 and the other at 1/10.
pub fn example1_target(inst: &LabeledInstance) -> YxSolution {
    let groups = example1_groups();
    let mut s = YxSolution::zeros(FACILITIES, inst.base.n_clients);
    s.y = vec![qi(1), qi(1), q(9, 10), q(9, 10)];
    let pattern: [[Q; GROUPS]; FACILITIES] = [
        [qi(1), qi(0), qi(0), qi(0)],
        [qi(0), qi(1), qi(0), qi(0)],
        [qi(0), qi(0), q(9, 10), q(1, 10)],
        [qi(0), qi(0), q(1, 10), q(9, 10)],
    ];
    for (i, row) in pattern.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            for j in groups[k].clone() {
                s.x[i][j] = v.clone();
            }
        }
    }
    s
}

/// Orbits of the complexity-3/4 class set inside the support of `target`.
pub fn example1_types(inst: &LabeledInstance, target: &YxSolution) -> Vec<Example1Type> {
    let groups = example1_groups();
    let bound = inst.base.capacity_or_bound as u32;
    let m = inst.base.n_clients as u32;
    let pairs: Vec<(usize, usize)> = (0..FACILITIES)
        .flat_map(|i| (0..GROUPS).map(move |k| (i, k)))
        .filter(|&(i, k)| !target.x[i][groups[k].start].is_zero())
        .collect();
    let mut out = Vec::new();
    let mut counts = [[0u32; GROUPS]; FACILITIES];
    let mut used = [0u32; GROUPS];
    fn rec(
        p: usize,
        pairs: &[(usize, usize)],
        sizes: &[u32; GROUPS],
        counts: &mut [[u32; GROUPS]; FACILITIES],
        used: &mut [u32; GROUPS],
        f: &mut dyn FnMut(&[[u32; GROUPS]; FACILITIES]),
    ) {
        if p == pairs.len() {
            f(counts);
            return;
        }
        let (i, k) = pairs[p];
        for c in 0..=sizes[k] - used[k] {
            counts[i][k] = c;
            used[k] += c;
            rec(p + 1, pairs, sizes, counts, used, f);
            used[k] -= c;
        }
        counts[i][k] = 0;
    }
    let sizes: [u32; GROUPS] = std::array::from_fn(|k| groups[k].len() as u32);
    rec(0, &pairs, &sizes, &mut counts, &mut used, &mut |counts| {
        let t = Example1Type {
            open: (0..FACILITIES).filter(|&i| counts[i].iter().sum::<u32>() > 0).collect(),
            counts: *counts,
            full: false,
        };
        if t.open.is_empty() || t.open.iter().any(|&i| t.load(i) < bound) {
            return;
        }
        let total: u32 = t.open.iter().map(|&i| t.load(i)).sum();
        let full = total == m && t.open.len() <= 3;
        let restriction = t.open.len() == 3 && m - total >= bound;
        if full || restriction {
            out.push(Example1Type { full, ..t });
        }
    });
    out
}

fn orbit_lp(types: &[Example1Type], target: &YxSolution) -> LinearProgram {
    let groups = example1_groups();
    let mut lp = LinearProgram::new();
    let vars: Vec<usize> = (0..types.len()).map(|t| lp.add_var(format!("w{t}"))).collect();
    for i in 0..FACILITIES {
        let row: Vec<(usize, Q)> = types
            .iter()
            .zip(&vars)
            .filter(|(t, _)| t.open.contains(&i))
            .map(|(_, &v)| (v, qi(1)))
            .collect();
        lp.add_labeled(format!("proj_y{i}"), row.clone(), Relation::Eq, target.y[i].clone());
        lp.add_labeled(format!("class_facility{i}"), row, Relation::Le, qi(1));
    }
    for (k, g) in groups.iter().enumerate() {
        let size = qu(g.len() as u64);
        for i in 0..FACILITIES {
            let row: Vec<(usize, Q)> = types
                .iter()
                .zip(&vars)
                .filter(|(t, _)| t.counts[i][k] > 0)
                .map(|(t, &v)| (v, qu(t.counts[i][k] as u64)))
                .collect();
            lp.add_labeled(format!("proj_x{i}_S{}", k + 1), row, Relation::Eq, &size * &target.x[i][g.start]);
        }
        let cover: Vec<(usize, Q)> = types
            .iter()
            .zip(&vars)
            .map(|(t, &v)| (v, qu((0..FACILITIES).map(|i| t.counts[i][k] as u64).sum())))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        lp.add_labeled(format!("class_cover_S{}", k + 1), cover, Relation::Eq, size);
    }
    lp
}

/// Decides both halves of the example by exact LP feasibility.
pub fn example1_verify() -> Result<Example1Report> {
    let inst = build_example1_instance();
    let target = example1_target(&inst);
    if !target.is_standard_feasible(&inst.base)? {
        return Err(Error::Construction("target violates the standard LP".into()));
    }

    let stars = classic_to_star(&inst.base, &target)?;
    let star_list: Vec<_> = stars.keys().cloned().collect();
    let admissible = star_list.iter().all(|s| s.is_admissible(&inst.base));
    let marginals = star_marginals(&inst.base, &stars) == target;
    let star_lp = projection_lp(&inst.base, &ClassSet::from_stars(&star_list), &target);
    let star_feasible = solve_lp(&star_lp)?.status == LpStatus::Optimal;

    let types = example1_types(&inst, &target);
    let represented = types.iter().fold(0u128, |a, t| a.saturating_add(t.orbit_size()));
    let reps = ClassSet::new(types.iter().map(Example1Type::representative).collect());
    let alpha = complexity(&reps, &inst.base)?;
    let contain = types
        .iter()
        .all(|t| t.open.contains(&0) && t.open.contains(&1) && !(t.open.contains(&2) && t.open.contains(&3)));

    let lp = orbit_lp(&types, &target);
    let sol = solve_lp(&lp)?;
    let feasible = sol.status == LpStatus::Optimal;
    let farkas = (sol.status == LpStatus::Infeasible)
        .then(|| infeasibility_bound(&lp, &sol.duals))
        .flatten();

    let mut measure = LinearProgram::new();
    let vars: Vec<usize> = (0..types.len()).map(|t| measure.add_var(format!("w{t}"))).collect();
    for i in [2, 3] {
        let row = types
            .iter()
            .zip(&vars)
            .filter(|(t, _)| t.open.contains(&i))
            .map(|(_, &v)| (v, qi(1)))
            .collect();
        measure.add_labeled(format!("proj_y{i}"), row, Relation::Eq, target.y[i].clone());
    }
    measure.set_objective(
        types
            .iter()
            .zip(&vars)
            .filter(|(t, _)| t.open.contains(&2) || t.open.contains(&3))
            .map(|(_, &v)| (v, Q::one()))
            .collect(),
    );
    let msol = solve_lp(&measure)?;
    let mbound = msol.objective.clone().unwrap_or_default();
    let certified = msol.status == LpStatus::Optimal && dual_bound(&measure, &msol.duals) == Some(mbound.clone());

    let passed = admissible
        && marginals
        && star_feasible
        && !feasible
        && farkas.is_some()
        && alpha == q(3, 4)
        && certified
        && mbound == q(18, 10);
    Ok(Example1Report {
        stars: star_list.len(),
        stars_admissible: admissible,
        star_marginals_match: marginals,
        star_feasible,
        orbit_types: types.len(),
        classes_represented: represented.to_string(),
        class_set_complexity: alpha,
        constellation_feasible: feasible,
        farkas_bound: farkas,
        far_measure_lower_bound: mbound,
        far_measure_certified: certified,
        orbits_contain_first_two: contain,
        passed,
    })
}
