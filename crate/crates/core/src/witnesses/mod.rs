//! Node solutions of the Cheap/Costly instance and their witness children.
//!
//! All clients start with the same assignment vector, and a touch changes
//! either every client the same way or a single client. Node solutions are
//! therefore stored per client orbit: one `Rest` orbit holding every client
//! that was never touched individually, plus one singleton orbit per touched
//! client. This keeps a node at `O((n + l) * depth)` rationals although the
//! dense dimension is `(n + l) * (n^4 + 1)`.

mod tree;

pub use tree::*;

use std::fmt;
use std::ops::Range;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{budget, Error, Result};
use crate::instances::{FacilityLabel, LabeledInstance};
use crate::rational::{qu, serde_q, serde_q_opt, serde_q_vec, Q};
use crate::relaxations::YxSolution;

/// A coordinate of a `(y, x)` solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    Y(usize),
    X(usize, usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Y(i) => write!(f, "y[{i}]"),
            Var::X(i, j) => write!(f, "x[{i},{j}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessType {
    Type1,
    Type2,
}

/// Which construction produced a child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// Integral touched variable: the child equals the parent.
    #[serde(rename = "forced")]
    Forced,
    #[serde(rename = "1a")]
    C1a,
    #[serde(rename = "1b")]
    C1b,
    #[serde(rename = "1c")]
    C1c,
    #[serde(rename = "2a")]
    C2a,
    #[serde(rename = "2b")]
    C2b,
    #[serde(rename = "2c")]
    C2c,
}

/// Symbols of the Cheap/Costly instance, recomputed from `n`, `l` and `H`.
#[derive(Clone, Debug, PartialEq)]
pub struct LsParams {
    pub n: usize,
    pub l: usize,
    pub u: u64,
    pub m: u64,
    pub h: Q,
    pub a: Q,
    pub b: Q,
    pub delta: Q,
}

impl LsParams {
    pub fn new(n: usize, l: usize, h: Q) -> Result<Self> {
        if n < 2 || l < 1 || !h.is_positive() {
            return Err(Error::InvalidParameter(format!("need n >= 2, l >= 1, H > 0 (got n={n}, l={l})")));
        }
        let u = (n as u64)
            .checked_pow(3)
            .ok_or_else(|| Error::InvalidParameter("n too large".into()))?;
        let n2 = qu((n * n) as u64);
        Ok(LsParams {
            n,
            l,
            u,
            m: n as u64 * u + 1,
            a: n2.recip(),
            b: &h / &n2,
            delta: h.recip(),
            h,
        })
    }

    /// Reads and cross-checks the symbols of an instance from
    /// `build_ls_instance`.
    pub fn from_instance(inst: &LabeledInstance) -> Result<Self> {
        let n = inst.facilities_with(FacilityLabel::Cheap).len();
        let l = inst.facilities_with(FacilityLabel::Costly).len();
        let p = LsParams::new(n, l, inst.param("H")?.clone())?;
        let base = &inst.base;
        let shaped = inst.facility_labels.len() == n + l
            && base.n_facilities == n + l
            && (0..n).all(|i| inst.facility_labels[i] == FacilityLabel::Cheap && base.opening_cost[i].is_zero())
            && (n..n + l).all(|i| base.opening_cost[i].is_one())
            && base.n_clients as u64 == p.m
            && base.capacity_or_bound == p.u
            && base.connection_cost.is_all_zero()
            && inst.param("a")? == &p.a
            && inst.param("b")? == &p.b;
        if !shaped {
            return Err(Error::WrongShape("not a Cheap/Costly instance".into()));
        }
        Ok(p)
    }

    pub fn facilities(&self) -> usize {
        self.n + self.l
    }

    pub fn cheap(&self) -> Range<usize> {
        0..self.n
    }

    pub fn costly(&self) -> Range<usize> {
        self.n..self.n + self.l
    }

    pub fn is_cheap(&self, i: usize) -> bool {
        i < self.n
    }

    /// Deepest level the survival guarantee covers, `floor(l / 10)`.
    pub fn depth_cap(&self) -> usize {
        self.l / 10
    }

    /// Cost of the root solution, `l * b`.
    pub fn root_cost(&self) -> Q {
        qu(self.l as u64) * &self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Members {
    /// Every client not listed in a singleton orbit.
    Rest,
    Client(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClientOrbit {
    pub members: Members,
    pub size: u64,
    /// Assignment of each member, indexed by facility.
    #[serde(with = "serde_q_vec")]
    pub profile: Vec<Q>,
}

/// Orbit-compressed `(y, x)` node solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSolution {
    #[serde(with = "serde_q_vec")]
    pub y: Vec<Q>,
    pub x_orbits: Vec<ClientOrbit>,
    pub touched_history: Vec<(Var, WitnessType)>,
    pub depth: usize,
    pub n_clients: u64,
}

/// The bad fractional solution: Cheap facilities open with `x = (1-a)/n`,
/// Costly facilities at `y = b` with `x = a/l`.
pub fn root_solution(inst: &LabeledInstance) -> Result<OrbitSolution> {
    let p = LsParams::from_instance(inst)?;
    Ok(root_from_params(&p))
}

pub fn root_from_params(p: &LsParams) -> OrbitSolution {
    let cheap_x = (Q::one() - &p.a) / qu(p.n as u64);
    let costly_x = &p.a / qu(p.l as u64);
    let mut y = vec![Q::one(); p.n];
    y.extend(std::iter::repeat_n(p.b.clone(), p.l));
    let mut profile = vec![cheap_x; p.n];
    profile.extend(std::iter::repeat_n(costly_x, p.l));
    OrbitSolution {
        y,
        x_orbits: vec![ClientOrbit {
            members: Members::Rest,
            size: p.m,
            profile,
        }],
        touched_history: Vec::new(),
        depth: 0,
        n_clients: p.m,
    }
}

fn integral(v: &Q) -> bool {
    v.is_zero() || v.is_one()
}

impl OrbitSolution {
    pub fn facilities(&self) -> usize {
        self.y.len()
    }

    pub fn singletons(&self) -> Vec<usize> {
        self.x_orbits
            .iter()
            .filter_map(|o| match o.members {
                Members::Client(c) => Some(c),
                Members::Rest => None,
            })
            .collect()
    }

    /// The `count` smallest clients of the `Rest` orbit.
    pub fn rest_members(&self, count: usize) -> Vec<usize> {
        let taken = self.singletons();
        let rest = self
            .x_orbits
            .iter()
            .find(|o| o.members == Members::Rest)
            .map_or(0, |o| o.size);
        (0..self.n_clients as usize)
            .filter(|c| !taken.contains(c))
            .take(count.min(rest as usize))
            .collect()
    }

    /// One client per orbit, paired with the orbit index.
    pub fn representatives(&self) -> Vec<(usize, usize)> {
        self.x_orbits
            .iter()
            .enumerate()
            .filter_map(|(k, o)| match o.members {
                Members::Client(c) => Some((k, c)),
                Members::Rest => self.rest_members(1).first().map(|&c| (k, c)),
            })
            .collect()
    }

    pub fn orbit_of(&self, client: usize) -> Result<usize> {
        if client as u64 >= self.n_clients {
            return Err(Error::MissingVariable(format!("client {client}")));
        }
        let mut rest = None;
        for (k, o) in self.x_orbits.iter().enumerate() {
            match o.members {
                Members::Client(c) if c == client => return Ok(k),
                Members::Rest if o.size > 0 => rest = Some(k),
                _ => {}
            }
        }
        rest.ok_or_else(|| Error::MissingVariable(format!("client {client}")))
    }

    pub fn value(&self, var: Var) -> Result<Q> {
        match var {
            Var::Y(i) => self
                .y
                .get(i)
                .cloned()
                .ok_or_else(|| Error::MissingVariable(var.to_string())),
            Var::X(i, j) => {
                let o = self.orbit_of(j)?;
                self.x_orbits[o]
                    .profile
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::MissingVariable(var.to_string()))
            }
        }
    }

    /// Total assignment to facility `i`.
    pub fn load(&self, i: usize) -> Q {
        self.x_orbits
            .iter()
            .fold(Q::zero(), |acc, o| acc + &o.profile[i] * qu(o.size))
    }

    pub fn cost(&self, inst: &LabeledInstance) -> Q {
        let base = &inst.base;
        let mut c: Q = self.y.iter().zip(&base.opening_cost).map(|(y, f)| y * f).sum();
        for (k, rep) in self.representatives() {
            let o = &self.x_orbits[k];
            for (i, x) in o.profile.iter().enumerate() {
                c += x * base.cost(i, rep) * qu(o.size);
            }
        }
        c
    }

    /// Moves `client` into its own orbit if it is not already alone.
    /// Returns the new solution and the index of the client's orbit.
    pub fn split(&self, client: usize) -> Result<(OrbitSolution, usize)> {
        let k = self.orbit_of(client)?;
        let mut out = self.clone();
        if out.x_orbits[k].size <= 1 {
            return Ok((out, k));
        }
        out.x_orbits[k].size -= 1;
        let profile = out.x_orbits[k].profile.clone();
        out.x_orbits.push(ClientOrbit {
            members: Members::Client(client),
            size: 1,
            profile,
        });
        let idx = out.x_orbits.len() - 1;
        Ok((out, idx))
    }

    /// Dense `(y, x)` expansion; only for small instances.
    pub fn expand(&self, cell_budget: u128) -> Result<YxSolution> {
        let cells = self.facilities() as u128 * self.n_clients as u128;
        if cells > cell_budget {
            return Err(budget("dense node expansion", cells, cell_budget));
        }
        let m = self.n_clients as usize;
        let mut out = YxSolution::zeros(self.facilities(), m);
        out.y = self.y.clone();
        for j in 0..m {
            let o = &self.x_orbits[self.orbit_of(j)?];
            for (i, x) in o.profile.iter().enumerate() {
                out.x[i][j] = x.clone();
            }
        }
        Ok(out)
    }

    fn child(&self, var: Var, wtype: WitnessType) -> OrbitSolution {
        let mut c = self.clone();
        c.touched_history.push((var, wtype));
        c.depth += 1;
        c
    }
}

fn nonzero_cheap(p: &LsParams, profile: &[Q]) -> usize {
    p.cheap().filter(|&c| !profile[c].is_zero()).count()
}

/// Child of `node` obtained by touching `var` as `wtype`, within the depth
/// cap of the survival guarantee.
pub fn touch(node: &OrbitSolution, p: &LsParams, var: Var, wtype: WitnessType) -> Result<OrbitSolution> {
    if node.depth >= p.depth_cap() {
        return Err(budget("witness tree depth", node.depth as u128 + 1, p.depth_cap() as u128));
    }
    touch_uncapped(node, p, var, wtype)
}

/// `touch` without the depth cap, for paths that deliberately go deeper.
pub fn touch_uncapped(node: &OrbitSolution, p: &LsParams, var: Var, wtype: WitnessType) -> Result<OrbitSolution> {
    touch_case(node, p, var, wtype).map(|(c, _)| c)
}

/// Child together with the construction that produced it.
pub fn touch_case(node: &OrbitSolution, p: &LsParams, var: Var, wtype: WitnessType) -> Result<(OrbitSolution, Case)> {
    if node.facilities() != p.facilities() || node.n_clients != p.m {
        return Err(Error::WrongShape("node does not match the instance".into()));
    }
    let v = node.value(var)?;
    if integral(&v) {
        return match (v.is_one(), wtype) {
            (true, WitnessType::Type1) | (false, WitnessType::Type2) => Ok((node.child(var, wtype), Case::Forced)),
            _ => Err(Error::InvalidParameter(format!(
                "{var} = {v} has no {wtype:?} witness"
            ))),
        };
    }
    let mut c = node.child(var, wtype);
    let one = Q::one();
    let case = match (var, wtype) {
        (Var::Y(i), _) if p.is_cheap(i) => {
            return Err(Error::Construction(format!("no witness rule for fractional {var}")));
        }
        (Var::Y(i), WitnessType::Type1) => {
            let y = &node.y[i];
            let r = y.recip() - &one;
            c.y[i] = one.clone();
            for o in &mut c.x_orbits {
                let xk = o.profile[i].clone();
                if xk.is_zero() {
                    continue;
                }
                o.profile[i] = &xk / y;
                let t = nonzero_cheap(p, &o.profile);
                if t == 0 {
                    return Err(Error::Construction(format!("no Cheap assignment left to absorb {var}")));
                }
                let d = &r * &xk / qu(t as u64);
                for ch in p.cheap() {
                    if !o.profile[ch].is_zero() {
                        o.profile[ch] -= &d;
                    }
                }
            }
            Case::C1a
        }
        (Var::Y(i), WitnessType::Type2) => {
            let y = &node.y[i];
            let f = y / (&one - y);
            let r = y.recip() - &one;
            c.y[i] = y * (&one - &f * &r);
            for o in &mut c.x_orbits {
                let xk = o.profile[i].clone();
                if xk.is_zero() {
                    continue;
                }
                o.profile[i] = &xk * (&one - &f * &r);
                let t = nonzero_cheap(p, &o.profile);
                if t == 0 {
                    return Err(Error::Construction(format!("no Cheap assignment left to absorb {var}")));
                }
                let d = &f * &r * &xk / qu(t as u64);
                for ch in p.cheap() {
                    if !o.profile[ch].is_zero() {
                        o.profile[ch] += &d;
                    }
                }
            }
            Case::C2a
        }
        (Var::X(i, j), wtype) => {
            let (mut s, k) = node.split(j)?;
            s.touched_history = c.touched_history;
            s.depth = c.depth;
            c = s;
            let prof = node.x_orbits[node.orbit_of(j)?].profile.clone();
            let x = &prof[i];
            let f = x / (&one - x);
            let cheap = p.is_cheap(i);
            if !cheap && node.y[i].is_zero() {
                return Err(Error::Construction(format!("{var} is fractional under a closed facility")));
            }
            let t = qu(nonzero_cheap(p, &prof) as u64);
            match (cheap, wtype) {
                (false, WitnessType::Type1) => {
                    c.y[i] = &node.y[i] * node.y[i].recip();
                    let out = &mut c.x_orbits[k].profile;
                    out.iter_mut().for_each(|e| *e = Q::zero());
                    out[i] = one.clone();
                    Case::C1b
                }
                (false, WitnessType::Type2) => {
                    let y = &node.y[i];
                    c.y[i] = y * (&one - &f * (y.recip() - &one));
                    scale_others(&mut c.x_orbits[k].profile, i, &(&one + &f));
                    Case::C2b
                }
                (true, WitnessType::Type1) => {
                    for ci in p.costly() {
                        let y = &node.y[ci];
                        if !integral(y) {
                            c.y[ci] = y * (&one - (y.recip() - &one) * &prof[ci] / (x * &t));
                        }
                    }
                    let out = &mut c.x_orbits[k].profile;
                    out.iter_mut().for_each(|e| *e = Q::zero());
                    out[i] = one.clone();
                    Case::C1c
                }
                (true, WitnessType::Type2) => {
                    for ci in p.costly() {
                        let y = &node.y[ci];
                        if !integral(y) {
                            c.y[ci] = y * (&one + &f * (y.recip() - &one) * &prof[ci] / (x * &t));
                        }
                    }
                    scale_others(&mut c.x_orbits[k].profile, i, &(&one + &f));
                    Case::C2c
                }
            }
        }
    };
    Ok((c, case))
}

fn scale_others(profile: &mut [Q], i: usize, s: &Q) {
    for (k, e) in profile.iter_mut().enumerate() {
        if k == i {
            *e = Q::zero();
        } else {
            *e *= s;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantStatus {
    pub name: String,
    pub holds: bool,
    /// Number of variables (or facilities) the bound applied to.
    pub checked: u64,
    /// Variable attaining the smallest slack.
    pub extremal: Option<String>,
    #[serde(with = "serde_q_opt")]
    pub slack: Option<Q>,
}

struct Tracker {
    name: &'static str,
    checked: u64,
    min: Option<(Q, String)>,
}

impl Tracker {
    fn new(name: &'static str) -> Self {
        Tracker {
            name,
            checked: 0,
            min: None,
        }
    }

    fn record(&mut self, slack: Q, weight: u64, label: impl FnOnce() -> String) {
        self.checked += weight;
        if self.min.as_ref().is_none_or(|(s, _)| slack < *s) {
            self.min = Some((slack, label()));
        }
    }

    fn finish(self) -> InvariantStatus {
        let (slack, extremal) = match self.min {
            Some((s, l)) => (Some(s), Some(l)),
            None => (None, None),
        };
        InvariantStatus {
            name: self.name.into(),
            holds: slack.as_ref().is_none_or(|s| !s.is_negative()),
            checked: self.checked,
            extremal,
            slack,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub depth: usize,
    /// Invariants 1, 2a, 2b, 2c, 3, 4a, 4b in order.
    pub invariants: Vec<InvariantStatus>,
    /// Invariant 2a with its upper relation read literally as `>=`.
    pub literal_2a_reading: InvariantStatus,
    pub nonnegativity: InvariantStatus,
    /// Zero Cheap assignments over clients without an integral assignment.
    pub zeroed_cheap_assignments: u64,
    pub zeroing_bound_holds: bool,
    pub singleton_orbits: usize,
    pub singleton_bound_holds: bool,
    pub all_hold: bool,
}

impl InvariantReport {
    pub fn get(&self, name: &str) -> Option<&InvariantStatus> {
        self.invariants.iter().find(|s| s.name == name)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .invariants
            .iter()
            .chain(std::iter::once(&self.nonnegativity))
            .filter(|s| !s.holds)
            .map(|s| format!("{} at {}", s.name, s.extremal.as_deref().unwrap_or("?")))
            .collect();
        if !self.zeroing_bound_holds {
            out.push(format!("{} zeroed Cheap assignments at depth {}", self.zeroed_cheap_assignments, self.depth));
        }
        if !self.singleton_bound_holds {
            out.push(format!("{} singleton orbits at depth {}", self.singleton_orbits, self.depth));
        }
        out
    }
}

/// The invariant bounds at depth `k`.
#[derive(Clone, Debug)]
pub struct InvariantBounds {
    pub y_lo: Q,
    pub y_hi: Q,
    pub cheap_lo: Q,
    pub cheap_hi: Q,
    pub costly_lo: Q,
    pub costly_hi: Q,
    pub opened_hi: Q,
    pub cheap_load: Q,
    pub costly_load: Q,
    pub opened_load: Q,
}

impl InvariantBounds {
    pub fn at(p: &LsParams, k: usize) -> Self {
        let one = Q::one();
        let (n, l, m) = (qu(p.n as u64), qu(p.l as u64), qu(p.m));
        let k2 = qu(2 * k as u64);
        let a_l = &p.a / &l;
        let base_cheap = (&one - &p.a) / &n;
        let wide = if p.l <= p.n { l.recip() } else { n.recip() };
        let costly_hi = &a_l + &k2 * &p.a * (&one - &p.a) / (&n * &l);
        let inflate = (&one + &p.delta) / &p.b;
        let costly_load = &m * &a_l + qu(k as u64);
        InvariantBounds {
            y_lo: &p.b - &k2 * &a_l,
            y_hi: &p.b + &k2 * &a_l,
            cheap_lo: &base_cheap - &k2 * &p.a / (&n * &l) / &p.b,
            cheap_hi: &base_cheap + &k2 * &base_cheap * wide,
            costly_lo: a_l.clone(),
            opened_hi: &costly_hi * &inflate,
            costly_hi,
            cheap_load: &m * &base_cheap + &k2 * &m * &p.a / (&n * &l),
            opened_load: &costly_load * &inflate,
            costly_load,
        }
    }
}

/// Exact check of the survival invariants at `k = node.depth`.
pub fn verify_invariants(node: &OrbitSolution, p: &LsParams) -> InvariantReport {
    let bd = InvariantBounds::at(p, node.depth);
    let mut t1 = Tracker::new("1");
    let mut t2a = Tracker::new("2a");
    let mut t2b = Tracker::new("2b");
    let mut t2c = Tracker::new("2c");
    let mut t3 = Tracker::new("3");
    let mut t4a = Tracker::new("4a");
    let mut t4b = Tracker::new("4b");
    let mut lit = Tracker::new("2a literal");
    let mut nn = Tracker::new("nonnegativity");
    for i in p.costly() {
        let y = &node.y[i];
        if !integral(y) {
            let s = (y - &bd.y_lo).min(&bd.y_hi - y);
            t1.record(s, 1, || Var::Y(i).to_string());
        }
    }
    for (i, y) in node.y.iter().enumerate() {
        nn.record(y.clone(), 1, || Var::Y(i).to_string());
    }
    let reps = node.representatives();
    let mut zeroed = 0u64;
    for &(k, rep) in &reps {
        let o = &node.x_orbits[k];
        let label = |i: usize| move || format!("{} (orbit of {} clients)", Var::X(i, rep), o.size);
        let has_unit = o.profile.iter().any(|x| x.is_one());
        for (i, x) in o.profile.iter().enumerate() {
            nn.record(x.clone(), o.size, label(i));
            if p.is_cheap(i) {
                if !has_unit && x.is_zero() {
                    zeroed += o.size;
                }
                if !integral(x) {
                    let s = (x - &bd.cheap_lo).min(&bd.cheap_hi - x);
                    t2a.record(s, o.size, label(i));
                    let ls = (x - &bd.cheap_lo).min(x - &bd.cheap_hi);
                    lit.record(ls, o.size, label(i));
                }
            } else {
                let y = &node.y[i];
                if !x.is_zero() && !integral(y) {
                    let s = (x - &bd.costly_lo).min(&bd.costly_hi - x);
                    t2b.record(s, o.size, label(i));
                }
                if !integral(x) && y.is_one() {
                    let s = (x - &bd.costly_lo).min(&bd.opened_hi - x);
                    t2c.record(s, o.size, label(i));
                }
            }
        }
    }
    for i in 0..p.facilities() {
        let load = node.load(i);
        let fac = || format!("facility {i}");
        if p.is_cheap(i) {
            t3.record(&bd.cheap_load - load, 1, fac);
        } else if node.y[i].is_one() {
            t4b.record(&bd.opened_load - load, 1, fac);
        } else {
            t4a.record(&bd.costly_load - load, 1, fac);
        }
    }
    let invariants: Vec<InvariantStatus> = [t1, t2a, t2b, t2c, t3, t4a, t4b].into_iter().map(Tracker::finish).collect();
    let nonnegativity = nn.finish();
    let singleton_orbits = node.singletons().len();
    let zeroing_bound_holds = zeroed <= node.depth as u64;
    let singleton_bound_holds = singleton_orbits <= node.depth;
    let all_hold = invariants.iter().all(|s| s.holds) && nonnegativity.holds && zeroing_bound_holds && singleton_bound_holds;
    InvariantReport {
        depth: node.depth,
        invariants,
        literal_2a_reading: lit.finish(),
        nonnegativity,
        zeroed_cheap_assignments: zeroed,
        zeroing_bound_holds,
        singleton_orbits,
        singleton_bound_holds,
        all_hold,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeViolation {
    /// One of `y_bounds`, `x_bounds`, `link`, `cover`, `capacity`, `partition`.
    pub constraint: String,
    pub at: String,
    #[serde(with = "serde_q")]
    pub lhs: Q,
    #[serde(with = "serde_q")]
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NodeFeasibility {
    pub feasible: bool,
    pub violations: Vec<NodeViolation>,
}

impl NodeFeasibility {
    pub fn cites(&self, constraint: &str) -> bool {
        self.violations.iter().any(|v| v.constraint == constraint)
    }
}

/// Exact check of the standard LP constraints on the orbit form: bounds on
/// `y` and `x`, `x <= y`, every client fully assigned, and capacities.
pub fn verify_node_feasibility(node: &OrbitSolution, p: &LsParams) -> NodeFeasibility {
    let mut v = Vec::new();
    let mut push = |c: &str, at: String, lhs: &Q, rhs: &Q| {
        v.push(NodeViolation {
            constraint: c.into(),
            at,
            lhs: lhs.clone(),
            rhs: rhs.clone(),
        })
    };
    let zero = Q::zero();
    let one = Q::one();
    let u = qu(p.u);
    if node.y.len() != p.facilities() {
        push("partition", "facility count".into(), &qu(node.y.len() as u64), &qu(p.facilities() as u64));
        return NodeFeasibility { feasible: false, violations: v };
    }
    for (i, y) in node.y.iter().enumerate() {
        if y.is_negative() {
            push("y_bounds", Var::Y(i).to_string(), y, &zero);
        }
        if y > &one {
            push("y_bounds", Var::Y(i).to_string(), y, &one);
        }
    }
    let total: u64 = node.x_orbits.iter().map(|o| o.size).sum();
    if total != p.m {
        push("partition", "orbit sizes".into(), &qu(total), &qu(p.m));
    }
    for (k, rep) in node.representatives() {
        let o = &node.x_orbits[k];
        let mut cover = Q::zero();
        for (i, x) in o.profile.iter().enumerate() {
            let at = || Var::X(i, rep).to_string();
            if x.is_negative() {
                push("x_bounds", at(), x, &zero);
            }
            if x > &one {
                push("x_bounds", at(), x, &one);
            }
            if x > &node.y[i] {
                push("link", at(), x, &node.y[i]);
            }
            cover += x;
        }
        if cover != one {
            push("cover", format!("client {rep}"), &cover, &one);
        }
    }
    for i in 0..p.facilities() {
        let load = node.load(i);
        let cap = &u * &node.y[i];
        if load > cap {
            push("capacity", format!("facility {i}"), &load, &cap);
        }
    }
    NodeFeasibility {
        feasible: v.is_empty(),
        violations: v,
    }
}

/// Full-form twin identity `z_t * child1 + (1 - z_t) * child2 = z`.
pub fn twin_identity(parent: &OrbitSolution, var: Var, type1: &OrbitSolution, type2: &OrbitSolution) -> Result<bool> {
    let zt = parent.value(var)?;
    let base = match var {
        Var::X(_, j) => parent.split(j)?.0,
        Var::Y(_) => parent.clone(),
    };
    let rest = Q::one() - &zt;
    let mix = |a: &Q, b: &Q| &zt * a + &rest * b;
    if type1.x_orbits.len() != base.x_orbits.len() || type2.x_orbits.len() != base.x_orbits.len() {
        return Ok(false);
    }
    let ys = (0..base.y.len()).all(|i| mix(&type1.y[i], &type2.y[i]) == base.y[i]);
    let xs = base.x_orbits.iter().enumerate().all(|(k, o)| {
        let (a, b) = (&type1.x_orbits[k], &type2.x_orbits[k]);
        a.members == o.members
            && b.members == o.members
            && a.size == o.size
            && b.size == o.size
            && (0..o.profile.len()).all(|i| mix(&a.profile[i], &b.profile[i]) == o.profile[i])
    });
    Ok(ys && xs)
}

#[cfg(test)]
mod tests;
