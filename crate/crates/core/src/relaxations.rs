//! Standard, star and constellation relaxations, the standard-to-star
//! conversion and class-set utilities.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{budget, Error, Result};
use crate::instances::{FacilityLocationInstance, Mode};
use crate::lp::{LinearProgram, Relation};
use crate::rational::{qi, qu, Q};
use crate::solver::{check_feasible, solve_lp, IntegralSolution, LpStatus};

/// Variable layout of the standard LP: `y_i` first, then `x_ij` row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StdLayout {
    pub n: usize,
    pub m: usize,
}

impl StdLayout {
    pub fn of(inst: &FacilityLocationInstance) -> Self {
        StdLayout {
            n: inst.n_facilities,
            m: inst.n_clients,
        }
    }
    pub fn y(&self, i: usize) -> usize {
        i
    }
    pub fn x(&self, i: usize, j: usize) -> usize {
        self.n + i * self.m + j
    }
    pub fn len(&self) -> usize {
        self.n + self.n * self.m
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Standard relaxation: bounds `0 <= x, y <= 1`, `x_ij <= y_i`, client
/// coverage, and the capacity (CFL) or lower-bound (LBFL) rows.
pub fn standard_lp(inst: &FacilityLocationInstance) -> LinearProgram {
    let lay = StdLayout::of(inst);
    let mut lp = LinearProgram::new();
    for i in 0..lay.n {
        lp.add_var_bounded(format!("y{i}"), Some(qi(0)), Some(qi(1)));
    }
    for i in 0..lay.n {
        for j in 0..lay.m {
            lp.add_var_bounded(format!("x{i}_{j}"), Some(qi(0)), Some(qi(1)));
        }
    }
    let mut obj = Vec::new();
    for i in 0..lay.n {
        obj.push((lay.y(i), inst.opening_cost[i].clone()));
        for j in 0..lay.m {
            let c = inst.cost(i, j);
            if !c.is_zero() {
                obj.push((lay.x(i, j), c.clone()));
            }
        }
    }
    lp.set_objective(obj);
    for i in 0..lay.n {
        for j in 0..lay.m {
            lp.add_labeled(
                format!("link{i}_{j}"),
                vec![(lay.x(i, j), qi(1)), (lay.y(i), qi(-1))],
                Relation::Le,
                qi(0),
            );
        }
    }
    for j in 0..lay.m {
        lp.add_labeled(
            format!("cover{j}"),
            (0..lay.n).map(|i| (lay.x(i, j), qi(1))).collect(),
            Relation::Eq,
            qi(1),
        );
    }
    let u = qu(inst.capacity_or_bound);
    for i in 0..lay.n {
        let mut row: Vec<(usize, Q)> = (0..lay.m).map(|j| (lay.x(i, j), qi(1))).collect();
        row.push((lay.y(i), -u.clone()));
        match inst.mode {
            Mode::Cfl => lp.add_labeled(format!("capacity{i}"), row, Relation::Le, qi(0)),
            Mode::Lbfl => lp.add_labeled(format!("lower_bound{i}"), row, Relation::Ge, qi(0)),
        };
    }
    lp
}

/// Dense fractional `(y, x)` solution.
#[derive(Clone, Debug, PartialEq)]
pub struct YxSolution {
    pub y: Vec<Q>,
    pub x: Vec<Vec<Q>>,
}

impl YxSolution {
    pub fn zeros(n: usize, m: usize) -> Self {
        YxSolution {
            y: vec![Q::zero(); n],
            x: vec![vec![Q::zero(); m]; n],
        }
    }

    pub fn from_integral(inst: &FacilityLocationInstance, sol: &IntegralSolution) -> Self {
        let mut s = Self::zeros(inst.n_facilities, inst.n_clients);
        for &i in &sol.open {
            s.y[i] = Q::one();
        }
        for (j, &i) in sol.assignment.iter().enumerate() {
            s.x[i][j] = Q::one();
        }
        s
    }

    pub fn to_point(&self) -> Vec<Q> {
        let mut p = self.y.clone();
        for row in &self.x {
            p.extend(row.iter().cloned());
        }
        p
    }

    pub fn from_point(lay: StdLayout, p: &[Q]) -> Self {
        YxSolution {
            y: p[..lay.n].to_vec(),
            x: (0..lay.n).map(|i| p[lay.x(i, 0)..lay.x(i, 0) + lay.m].to_vec()).collect(),
        }
    }

    pub fn cost(&self, inst: &FacilityLocationInstance) -> Q {
        let mut c = Q::zero();
        for (i, yi) in self.y.iter().enumerate() {
            c += &inst.opening_cost[i] * yi;
            for (j, xij) in self.x[i].iter().enumerate() {
                if !xij.is_zero() {
                    c += inst.cost(i, j) * xij;
                }
            }
        }
        c
    }

    /// Whether the solution satisfies every standard-LP constraint exactly.
    pub fn is_standard_feasible(&self, inst: &FacilityLocationInstance) -> Result<bool> {
        Ok(check_feasible(&self.to_point(), &standard_lp(inst))?.feasible)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Star {
    pub facility: usize,
    pub clients: Vec<usize>,
}

impl Star {
    pub fn cost(&self, inst: &FacilityLocationInstance) -> Q {
        let mut c = inst.opening_cost[self.facility].clone();
        for &j in &self.clients {
            c += inst.cost(self.facility, j);
        }
        c
    }

    pub fn is_admissible(&self, inst: &FacilityLocationInstance) -> bool {
        let k = self.clients.len() as u64;
        match inst.mode {
            Mode::Cfl => k <= inst.capacity_or_bound,
            Mode::Lbfl => k >= inst.capacity_or_bound,
        }
    }

    pub fn as_class(&self) -> Class {
        Class::new(vec![self.facility], self.clients.iter().map(|&j| (self.facility, j)).collect())
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for t in 0..k {
        r = r.saturating_mul(n - t) / (t + 1);
    }
    r
}

fn star_sizes(inst: &FacilityLocationInstance, max_star_size: Option<usize>) -> std::ops::RangeInclusive<usize> {
    let m = inst.n_clients;
    let cap = max_star_size.unwrap_or(m).min(m);
    let u = inst.capacity_or_bound as usize;
    match inst.mode {
        Mode::Cfl => 1..=cap.min(u),
        Mode::Lbfl => u..=cap,
    }
}

/// Number of stars `star_lp` would enumerate.
pub fn star_count(inst: &FacilityLocationInstance, max_star_size: Option<usize>) -> u128 {
    let per: u128 = star_sizes(inst, max_star_size)
        .map(|k| binom(inst.n_clients as u128, k as u128))
        .fold(0u128, |a, b| a.saturating_add(b));
    per.saturating_mul(inst.n_facilities as u128)
}

/// All admissible stars, in facility-major, size-then-lexicographic order.
pub fn enumerate_stars(
    inst: &FacilityLocationInstance,
    max_star_size: Option<usize>,
    star_budget: u128,
) -> Result<Vec<Star>> {
    let count = star_count(inst, max_star_size);
    if count > star_budget {
        return Err(budget("stars", count, star_budget));
    }
    let mut out = Vec::with_capacity(count as usize);
    for i in 0..inst.n_facilities {
        for k in star_sizes(inst, max_star_size) {
            for_each_subset(inst.n_clients, k, &mut |s| {
                out.push(Star {
                    facility: i,
                    clients: s.to_vec(),
                })
            });
        }
    }
    Ok(out)
}

fn for_each_subset(m: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = k - cur.len();
        for j in start..=(m - need) {
            cur.push(j);
            rec(j + 1, m, k, cur, f);
            cur.pop();
        }
    }
    if k <= m {
        rec(0, m, k, &mut Vec::with_capacity(k), f);
    }
}

fn star_name(s: &Star) -> String {
    let cl: Vec<String> = s.clients.iter().map(|j| j.to_string()).collect();
    format!("s{}_{}", s.facility, cl.join("."))
}

/// LP over a given star list: client cover `= 1`, facility use `<= 1`.
pub fn star_lp_over(inst: &FacilityLocationInstance, stars: &[Star]) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let mut by_client = vec![Vec::new(); inst.n_clients];
    let mut by_facility = vec![Vec::new(); inst.n_facilities];
    let mut obj = Vec::with_capacity(stars.len());
    for s in stars {
        let v = lp.add_var(star_name(s));
        obj.push((v, s.cost(inst)));
        by_facility[s.facility].push((v, qi(1)));
        for &j in &s.clients {
            by_client[j].push((v, qi(1)));
        }
    }
    lp.set_objective(obj);
    for (j, row) in by_client.into_iter().enumerate() {
        lp.add_labeled(format!("star_cover{j}"), row, Relation::Eq, qi(1));
    }
    for (i, row) in by_facility.into_iter().enumerate() {
        lp.add_labeled(format!("star_facility{i}"), row, Relation::Le, qi(1));
    }
    lp
}

/// Star relaxation over every admissible star (optionally size-capped).
pub fn star_lp(
    inst: &FacilityLocationInstance,
    max_star_size: Option<usize>,
    star_budget: u128,
) -> Result<(LinearProgram, Vec<Star>)> {
    let stars = enumerate_stars(inst, max_star_size, star_budget)?;
    Ok((star_lp_over(inst, &stars), stars))
}

/// Converts a standard-LP solution into star weights with the same marginals
/// and cost by strip packing: facility `i` gets a rectangle of height `y_i`
/// split into `ceil(sum_j x_ij / y_i)` strips; clients are packed in index
/// order, and the horizontal cuts at all packing heights yield the stars.
pub fn classic_to_star(inst: &FacilityLocationInstance, sol: &YxSolution) -> Result<BTreeMap<Star, Q>> {
    if !sol.is_standard_feasible(inst)? {
        return Err(Error::InfeasibleInput("solution violates the standard LP".into()));
    }
    let mut out: BTreeMap<Star, Q> = BTreeMap::new();
    for i in 0..inst.n_facilities {
        let y = &sol.y[i];
        if y.is_zero() {
            continue;
        }
        // (strip, client, lo, hi)
        let mut segments: Vec<(usize, usize, Q, Q)> = Vec::new();
        let mut cuts: BTreeSet<Q> = [Q::zero(), y.clone()].into_iter().collect();
        let mut strip = 0usize;
        let mut h = Q::zero();
        for (j, xij) in sol.x[i].iter().enumerate() {
            if xij.is_zero() {
                continue;
            }
            let top = &h + xij;
            if &top <= y {
                segments.push((strip, j, h.clone(), top.clone()));
                h = top;
            } else {
                segments.push((strip, j, h.clone(), y.clone()));
                strip += 1;
                let rest = &top - y;
                segments.push((strip, j, Q::zero(), rest.clone()));
                h = rest;
            }
            cuts.insert(h.clone());
            if &h == y {
                strip += 1;
                h = Q::zero();
            }
        }
        let cuts: Vec<Q> = cuts.into_iter().collect();
        for w in cuts.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            let mut clients: Vec<usize> = segments
                .iter()
                .filter(|(_, _, a, b)| a <= lo && b >= hi)
                .map(|(_, j, _, _)| *j)
                .collect();
            clients.sort_unstable();
            let star = Star { facility: i, clients };
            *out.entry(star).or_insert_with(Q::zero) += hi - lo;
        }
    }
    Ok(out)
}

/// Projects star weights back to `(y, x)`.
pub fn star_marginals(inst: &FacilityLocationInstance, stars: &BTreeMap<Star, Q>) -> YxSolution {
    let mut s = YxSolution::zeros(inst.n_facilities, inst.n_clients);
    for (st, w) in stars {
        s.y[st.facility] += w;
        for &j in &st.clients {
            s.x[st.facility][j] += w;
        }
    }
    s
}

/// A 0-1 `(y, x)` vector stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Class {
    #[serde(rename = "facilities")]
    pub open: Vec<usize>,
    pub assignments: Vec<(usize, usize)>,
}

impl Class {
    /// Normalizes the order of facilities and assignments.
    pub fn new(mut open: Vec<usize>, mut assignments: Vec<(usize, usize)>) -> Self {
        open.sort_unstable();
        open.dedup();
        assignments.sort_unstable_by_key(|&(i, j)| (j, i));
        assignments.dedup();
        Class { open, assignments }
    }

    pub fn from_integral(sol: &IntegralSolution) -> Self {
        Class::new(
            sol.open.clone(),
            sol.assignment.iter().enumerate().map(|(j, &i)| (i, j)).collect(),
        )
    }

    /// Checks that assigned facilities are open and each client appears once.
    pub fn is_well_formed(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.assignments
            .iter()
            .all(|(i, j)| self.open.binary_search(i).is_ok() && seen.insert(*j))
    }

    pub fn cost(&self, inst: &FacilityLocationInstance) -> Q {
        let mut c: Q = self.open.iter().map(|&i| inst.opening_cost[i].clone()).sum();
        for &(i, j) in &self.assignments {
            c += inst.cost(i, j);
        }
        c
    }

    pub fn clients_of(&self, i: usize) -> usize {
        self.assignments.iter().filter(|(f, _)| *f == i).count()
    }

    fn permuted(&self, fac: &[usize], cli: &[usize]) -> Class {
        Class::new(
            self.open.iter().map(|&i| fac[i]).collect(),
            self.assignments.iter().map(|&(i, j)| (fac[i], cli[j])).collect(),
        )
    }

    /// Sorted list of (client count, ...) over open facilities; equal
    /// signatures are exactly the symmetry orbits.
    fn signature(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.open.iter().map(|&i| self.clients_of(i)).collect();
        s.sort_unstable();
        s
    }
}

/// Serialized as the bare class list, matching [`ClassSet::to_json`].
impl Serialize for ClassSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.classes.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ClassSet {
    pub classes: Vec<Class>,
    pub symmetric_closed: bool,
}

impl ClassSet {
    pub fn new(classes: Vec<Class>) -> Self {
        ClassSet {
            classes,
            symmetric_closed: false,
        }
    }

    pub fn from_stars(stars: &[Star]) -> Self {
        ClassSet::new(stars.iter().map(Star::as_class).collect())
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.classes)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: Vec<Class> = serde_json::from_str(s)?;
        let classes: Vec<Class> = raw.into_iter().map(|c| Class::new(c.open, c.assignments)).collect();
        if let Some(c) = classes.iter().find(|c| !c.is_well_formed()) {
            return Err(Error::Parse(format!("class {c:?} assigns to a closed facility or repeats a client")));
        }
        Ok(ClassSet::new(classes))
    }

    /// Checks closure under the given facility and client permutations.
    pub fn closed_under(&self, fac: &[usize], cli: &[usize]) -> bool {
        let set: BTreeSet<&Class> = self.classes.iter().collect();
        self.classes.iter().all(|c| set.contains(&c.permuted(fac, cli)))
    }
}

/// Constellation LP: one variable per class, client cover `= 1`, facility
/// budget `<= 1`.
pub fn constellation_lp(inst: &FacilityLocationInstance, cs: &ClassSet) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let mut by_client = vec![Vec::new(); inst.n_clients];
    let mut by_facility = vec![Vec::new(); inst.n_facilities];
    let mut obj = Vec::with_capacity(cs.len());
    for (k, cl) in cs.classes.iter().enumerate() {
        let v = lp.add_var(format!("k{k}"));
        obj.push((v, cl.cost(inst)));
        for &i in &cl.open {
            by_facility[i].push((v, qi(1)));
        }
        for &(_, j) in &cl.assignments {
            by_client[j].push((v, qi(1)));
        }
    }
    lp.set_objective(obj);
    for (j, row) in by_client.into_iter().enumerate() {
        lp.add_labeled(format!("class_cover{j}"), row, Relation::Eq, qi(1));
    }
    for (i, row) in by_facility.into_iter().enumerate() {
        lp.add_labeled(format!("class_facility{i}"), row, Relation::Le, qi(1));
    }
    lp
}

/// Projection of class weights to `(y, x)`.
pub fn project_constellation(
    inst: &FacilityLocationInstance,
    cs: &ClassSet,
    weights: &[Q],
) -> Result<YxSolution> {
    if weights.len() != cs.len() {
        return Err(Error::WrongShape(format!("{} weights for {} classes", weights.len(), cs.len())));
    }
    let mut s = YxSolution::zeros(inst.n_facilities, inst.n_clients);
    for (cl, w) in cs.classes.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for &i in &cl.open {
            s.y[i] += w;
        }
        for &(i, j) in &cl.assignments {
            s.x[i][j] += w;
        }
    }
    Ok(s)
}

/// Constellation LP plus equalities forcing its projection to equal `target`.
pub fn projection_lp(inst: &FacilityLocationInstance, cs: &ClassSet, target: &YxSolution) -> LinearProgram {
    let mut lp = constellation_lp(inst, cs);
    let mut y_rows = vec![Vec::new(); inst.n_facilities];
    let mut x_rows: BTreeMap<(usize, usize), Vec<(usize, Q)>> = BTreeMap::new();
    for (k, cl) in cs.classes.iter().enumerate() {
        for &i in &cl.open {
            y_rows[i].push((k, qi(1)));
        }
        for &(i, j) in &cl.assignments {
            x_rows.entry((i, j)).or_default().push((k, qi(1)));
        }
    }
    for (i, row) in y_rows.into_iter().enumerate() {
        lp.add_labeled(format!("proj_y{i}"), row, Relation::Eq, target.y[i].clone());
    }
    for i in 0..inst.n_facilities {
        for j in 0..inst.n_clients {
            let row = x_rows.remove(&(i, j)).unwrap_or_default();
            lp.add_labeled(format!("proj_x{i}_{j}"), row, Relation::Eq, target.x[i][j].clone());
        }
    }
    lp
}

/// Whether some feasible point of the constellation LP projects to `target`.
pub fn projects_onto(inst: &FacilityLocationInstance, cs: &ClassSet, target: &YxSolution) -> Result<bool> {
    Ok(solve_lp(&projection_lp(inst, cs, target))?.status == LpStatus::Optimal)
}

/// Size of the orbit of `cl` under all facility and client permutations.
pub fn orbit_size(cl: &Class, n: usize, m: usize) -> u128 {
    let counts: Vec<usize> = cl.open.iter().map(|&i| cl.clients_of(i)).collect();
    let k = counts.len();
    let mut groups: BTreeMap<usize, u128> = BTreeMap::new();
    for c in &counts {
        *groups.entry(*c).or_default() += 1;
    }
    let mut fac: u128 = 1;
    for t in 0..k {
        fac = fac.saturating_mul((n - t) as u128);
    }
    for g in groups.values() {
        for t in 1..=*g {
            fac /= t;
        }
    }
    let mut cli: u128 = 1;
    let mut left = m as u128;
    for &c in &counts {
        cli = cli.saturating_mul(binom(left, c as u128));
        left -= c as u128;
    }
    fac.saturating_mul(cli)
}

/// Closes `cs` under all facility and client permutations.
pub fn symmetry_closure(cs: &ClassSet, inst: &FacilityLocationInstance, orbit_budget: u128) -> Result<ClassSet> {
    let (n, m) = (inst.n_facilities, inst.n_clients);
    let mut seen_sig: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out: BTreeSet<Class> = BTreeSet::new();
    for cl in &cs.classes {
        if !seen_sig.insert(cl.signature()) {
            continue;
        }
        let size = orbit_size(cl, n, m);
        if size > orbit_budget {
            return Err(budget("class orbit", size, orbit_budget));
        }
        let counts = cl.signature();
        generate_orbit(&counts, n, m, &mut out);
    }
    Ok(ClassSet {
        classes: out.into_iter().collect(),
        symmetric_closed: true,
    })
}

fn generate_orbit(counts: &[usize], n: usize, m: usize, out: &mut BTreeSet<Class>) {
    fn rec(
        counts: &[usize],
        n: usize,
        m: usize,
        used_f: &mut Vec<usize>,
        used_c: &mut Vec<bool>,
        assign: &mut Vec<(usize, usize)>,
        out: &mut BTreeSet<Class>,
    ) {
        let depth = used_f.len();
        if depth == counts.len() {
            out.insert(Class::new(used_f.clone(), assign.clone()));
            return;
        }
        for f in 0..n {
            if used_f.contains(&f) {
                continue;
            }
            let free: Vec<usize> = (0..m).filter(|&j| !used_c[j]).collect();
            let k = counts[depth];
            if k > free.len() {
                continue;
            }
            for_each_subset(free.len(), k, &mut |idx| {
                let chosen: Vec<usize> = idx.iter().map(|&p| free[p]).collect();
                for &j in &chosen {
                    used_c[j] = true;
                    assign.push((f, j));
                }
                used_f.push(f);
                rec(counts, n, m, used_f, used_c, assign, out);
                used_f.pop();
                for &j in &chosen {
                    used_c[j] = false;
                    assign.pop();
                }
            });
        }
    }
    rec(counts, n, m, &mut Vec::new(), &mut vec![false; m], &mut Vec::new(), out);
}

/// Largest number of facilities open in some integral solution, by brute
/// force over facility subsets (uniform bounds make feasibility a count).
pub fn max_openable(inst: &FacilityLocationInstance, subset_budget: u128) -> Result<usize> {
    let n = inst.n_facilities;
    let subsets = 1u128.checked_shl(n as u32).unwrap_or(u128::MAX);
    if n > 20 || subsets > subset_budget {
        // Every subset of a given size behaves the same; test one per size.
        return Ok((1..=n).rev().find(|&k| size_feasible(inst, k)).unwrap_or(0));
    }
    let mut best = 0;
    for mask in 1u64..(1u64 << n) {
        let k = mask.count_ones() as usize;
        if k > best && size_feasible(inst, k) {
            best = k;
        }
    }
    Ok(best)
}

fn size_feasible(inst: &FacilityLocationInstance, k: usize) -> bool {
    let (k, m, u) = (k as u128, inst.n_clients as u128, inst.capacity_or_bound as u128);
    match inst.mode {
        Mode::Cfl => k * u >= m,
        Mode::Lbfl => k * u <= m,
    }
}

/// Complexity: the largest `|F(cl)| / |F'|` over the class set.
pub fn complexity(cs: &ClassSet, inst: &FacilityLocationInstance) -> Result<Q> {
    if !inst.integrally_feasible() {
        return Err(Error::InfeasibleInput("instance has no integral solution".into()));
    }
    let f = max_openable(inst, crate::solver::DEFAULT_SUBSET_BUDGET)?;
    let top = cs.classes.iter().map(|c| c.open.len()).max().unwrap_or(0);
    Ok(qu(top as u64) / qu(f as u64))
}

/// Number of integral solutions `enumerate_integral_solutions` would visit.
pub fn assignment_space(inst: &FacilityLocationInstance) -> u128 {
    let n = inst.n_facilities as u128;
    let mut total: u128 = 0;
    for k in 1..=n {
        let subsets = binom(n, k);
        let maps = k.checked_pow(inst.n_clients as u32).unwrap_or(u128::MAX);
        total = total.saturating_add(subsets.saturating_mul(maps));
    }
    total
}

/// Every integral solution (open set and assignment), where every open
/// facility respects the capacity or lower bound.
pub fn enumerate_integral_solutions(
    inst: &FacilityLocationInstance,
    solution_budget: u128,
) -> Result<Vec<IntegralSolution>> {
    let space = assignment_space(inst);
    if space > solution_budget {
        return Err(budget("integral solutions", space, solution_budget));
    }
    let (n, m) = (inst.n_facilities, inst.n_clients);
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let open: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let mut assign = vec![0usize; m];
        loop {
            let sol = IntegralSolution {
                open: open.clone(),
                assignment: assign.iter().map(|&p| open[p]).collect(),
                cost: Q::zero(),
            };
            if sol.is_feasible(inst) {
                out.push(IntegralSolution::evaluate(inst, sol.open, sol.assignment));
            }
            // Next assignment in mixed radix |open|.
            let mut pos = 0;
            while pos < m {
                assign[pos] += 1;
                if assign[pos] < open.len() {
                    break;
                }
                assign[pos] = 0;
                pos += 1;
            }
            if pos == m {
                break;
            }
        }
    }
    Ok(out)
}

/// Class set with one class per integral solution.
pub fn integral_class_set(inst: &FacilityLocationInstance, solution_budget: u128) -> Result<ClassSet> {
    let sols = enumerate_integral_solutions(inst, solution_budget)?;
    Ok(ClassSet {
        classes: sols.iter().map(Class::from_integral).collect(),
        symmetric_closed: true,
    })
}

#[derive(Clone, Debug)]
pub struct ValidityReport {
    pub valid: bool,
    pub checked: usize,
    pub witness: Option<IntegralSolution>,
}

/// Validity: every integral solution must be the projection of a feasible
/// constellation point. Decided by one feasibility LP per integral solution.
pub fn validity_check(cs: &ClassSet, inst: &FacilityLocationInstance, solution_budget: u128) -> Result<ValidityReport> {
    let sols = enumerate_integral_solutions(inst, solution_budget)?;
    for (k, sol) in sols.iter().enumerate() {
        let target = YxSolution::from_integral(inst, sol);
        if !projects_onto(inst, cs, &target)? {
            return Ok(ValidityReport {
                valid: false,
                checked: k + 1,
                witness: Some(sol.clone()),
            });
        }
    }
    Ok(ValidityReport {
        valid: true,
        checked: sols.len(),
        witness: None,
    })
}

/// The `t` cyclic windows of `r` consecutive open facilities of an integral
/// solution, each keeping that solution's assignments.
pub fn cyclic_classes(sol: &IntegralSolution, r: usize) -> Result<Vec<Class>> {
    let t = sol.open.len();
    if r == 0 || r > t {
        return Err(Error::InvalidParameter(format!("window {r} for {t} open facilities")));
    }
    let mut open = sol.open.clone();
    open.sort_unstable();
    Ok((0..t)
        .map(|s| {
            let window: Vec<usize> = (0..r).map(|d| open[(s + d) % t]).collect();
            let assigns = sol
                .assignment
                .iter()
                .enumerate()
                .filter(|(_, i)| window.contains(i))
                .map(|(j, &i)| (i, j))
                .collect();
            Class::new(window, assigns)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{random_instance, ConnectionCosts};
    use crate::rational::q;
    use crate::solver::{integral_optimum, DEFAULT_SUBSET_BUDGET};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn toy(mode: Mode, n: usize, m: usize, u: u64) -> FacilityLocationInstance {
        FacilityLocationInstance {
            mode,
            n_facilities: n,
            n_clients: m,
            opening_cost: vec![qi(0); n],
            connection_cost: ConnectionCosts::uniform(qi(0)),
            capacity_or_bound: u,
            metric: true,
        }
    }

    #[test]
    fn trivial_standard_lp() {
        let mut inst = toy(Mode::Cfl, 1, 1, 1);
        inst.connection_cost.set(0, 0, qi(0));
        let s = solve_lp(&standard_lp(&inst)).unwrap();
        assert_eq!(s.objective, Some(qi(0)));
        assert_eq!(s.values, vec![qi(1), qi(1)]);
    }

    #[test]
    fn star_counts() {
        assert_eq!(enumerate_stars(&toy(Mode::Cfl, 1, 2, 2), None, 100).unwrap().len(), 3);
        assert_eq!(enumerate_stars(&toy(Mode::Lbfl, 2, 3, 2), None, 100).unwrap().len(), 8);
        let err = enumerate_stars(&toy(Mode::Cfl, 3, 30, 30), None, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn random_standard_equals_star() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let inst = random_instance(&mut rng, 3, 5, Mode::Cfl, 2).unwrap();
        let a = solve_lp(&standard_lp(&inst)).unwrap().objective.unwrap();
        let (lp, _) = star_lp(&inst, None, 10_000).unwrap();
        let b = solve_lp(&lp).unwrap().objective.unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn strip_packing_integral_star() {
        let inst = toy(Mode::Lbfl, 1, 3, 3);
        let mut s = YxSolution::zeros(1, 3);
        s.y[0] = qi(1);
        s.x[0] = vec![qi(1); 3];
        let stars = classic_to_star(&inst, &s).unwrap();
        assert_eq!(stars.len(), 1);
        assert_eq!(stars.values().next(), Some(&qi(1)));
    }

    #[test]
    fn orbit_of_two_client_class() {
        let inst = toy(Mode::Cfl, 2, 3, 3);
        let cl = Class::new(vec![0], vec![(0, 0), (0, 1)]);
        assert_eq!(orbit_size(&cl, 2, 3), 6);
        let closed = symmetry_closure(&ClassSet::new(vec![cl]), &inst, 100).unwrap();
        assert_eq!(closed.len(), 6);
        assert!(closed.symmetric_closed);
        let again = symmetry_closure(&closed, &inst, 100).unwrap();
        assert_eq!(again.classes, closed.classes);
        assert!(closed.closed_under(&[1, 0], &[2, 0, 1]));
    }

    #[test]
    fn orbit_of_full_integral_solution() {
        let inst = toy(Mode::Cfl, 2, 2, 1);
        let sols = enumerate_integral_solutions(&inst, 1000).unwrap();
        assert_eq!(sols.len(), 2);
        let closed = symmetry_closure(&ClassSet::new(vec![Class::from_integral(&sols[0])]), &inst, 100).unwrap();
        let all: BTreeSet<Class> = sols.iter().map(Class::from_integral).collect();
        assert_eq!(closed.classes.into_iter().collect::<BTreeSet<_>>(), all);
    }

    #[test]
    fn complexity_examples() {
        let inst = toy(Mode::Lbfl, 4, 40, 10);
        let cs = ClassSet::new(vec![Class::new(vec![2], vec![])]);
        assert_eq!(complexity(&cs, &inst).unwrap(), q(1, 4));
        let inst = toy(Mode::Cfl, 2, 2, 1);
        let cs = integral_class_set(&inst, 1000).unwrap();
        assert_eq!(complexity(&cs, &inst).unwrap(), qi(1));
    }

    #[test]
    fn validity_examples() {
        let inst = toy(Mode::Cfl, 2, 4, 2);
        let all = integral_class_set(&inst, 10_000).unwrap();
        assert!(validity_check(&all, &inst, 10_000).unwrap().valid);
        let empty = ClassSet::default();
        let r = validity_check(&empty, &inst, 10_000).unwrap();
        assert!(!r.valid && r.witness.is_some());
        let (_, stars) = star_lp(&inst, None, 10_000).unwrap();
        assert!(validity_check(&ClassSet::from_stars(&stars), &inst, 10_000).unwrap().valid);
    }

    #[test]
    fn constellation_of_integral_solutions_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let inst = random_instance(&mut rng, 2, 3, Mode::Cfl, 2).unwrap();
        let cs = integral_class_set(&inst, 10_000).unwrap();
        let lp = solve_lp(&constellation_lp(&inst, &cs)).unwrap().objective.unwrap();
        assert_eq!(lp, integral_optimum(&inst, DEFAULT_SUBSET_BUDGET).unwrap().cost);
    }

    #[test]
    fn cyclic_windows_reconstruct_solution() {
        let inst = toy(Mode::Cfl, 4, 4, 1);
        let sol = IntegralSolution::evaluate(&inst, vec![0, 1, 2, 3], vec![3, 2, 1, 0]);
        let classes = cyclic_classes(&sol, 3).unwrap();
        let cs = ClassSet::new(classes);
        let w = vec![q(1, 3); 4];
        let p = project_constellation(&inst, &cs, &w).unwrap();
        assert_eq!(p, YxSolution::from_integral(&inst, &sol));
    }

    #[test]
    fn class_json_round_trip() {
        let cs = ClassSet::new(vec![Class::new(vec![1, 0], vec![(1, 2), (0, 0)])]);
        let back = ClassSet::from_json(&cs.to_json().unwrap()).unwrap();
        assert_eq!(back, cs);
        assert!(ClassSet::from_json(r#"[{"facilities":[0],"assignments":[[1,0]]}]"#).is_err());
    }
}
