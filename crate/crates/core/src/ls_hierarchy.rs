//! The Lovász–Schrijver `N` operator over a polytope `K` in `[0,1]^n`:
//! protection-matrix checking, witness symmetry and twins, a brute-force
//! membership oracle for tiny dimensions, and the LS+ diagonal-form PSD test.
//!
//! Coordinates of cone vectors are indexed like the variables of `K`; the
//! homogenizing coordinate is kept separately as `z0`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{budget, Error, Result};
use crate::lp::{LinearProgram, Relation};
use crate::rational::{fmt_q, Q};
use crate::solver::{check_feasible, solve_lp_with, LpStatus, SolveOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct ConeVector {
    pub z0: Q,
    pub coords: Vec<Q>,
}

impl ConeVector {
    /// Vector on the hyperplane `z0 = 1`.
    pub fn point(coords: Vec<Q>) -> Self {
        ConeVector { z0: Q::one(), coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn scale(&self, s: &Q) -> Self {
        ConeVector {
            z0: &self.z0 * s,
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn sub(&self, o: &ConeVector) -> Self {
        ConeVector {
            z0: &self.z0 - &o.z0,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, o: &ConeVector) -> Self {
        ConeVector {
            z0: &self.z0 + &o.z0,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero() || c.is_one())
    }

    /// Sparse JSON: `{"z0": "1", "coords": {"3": "1/2", ...}}`.
    pub fn to_json(&self) -> serde_json::Value {
        let coords: BTreeMap<String, String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i.to_string(), fmt_q(v)))
            .collect();
        serde_json::json!({ "z0": fmt_q(&self.z0), "coords": coords })
    }
}

/// One failed condition with the entries involved.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckViolation {
    pub condition: String,
    pub indices: Vec<usize>,
    #[serde(with = "crate::rational::serde_q")]
    pub lhs: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub rhs: Q,
}

impl CheckViolation {
    fn new(condition: impl Into<String>, indices: Vec<usize>, lhs: &Q, rhs: &Q) -> Self {
        CheckViolation {
            condition: condition.into(),
            indices,
            lhs: lhs.clone(),
            rhs: rhs.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub violations: Vec<CheckViolation>,
}

impl CheckReport {
    fn from_violations(violations: Vec<CheckViolation>) -> Self {
        CheckReport {
            passed: violations.is_empty(),
            violations,
        }
    }
}

/// A protection matrix given by its nontrivial rows. Row 0 is the base vector
/// itself; rows listed in `zero_rows` are zero; a variable at value 1 with no
/// stored row uses the base vector.
#[derive(Clone, Debug)]
pub struct ProtectionMatrixView {
    pub base: ConeVector,
    pub rows: BTreeMap<usize, ConeVector>,
    pub zero_rows: BTreeSet<usize>,
}

impl ProtectionMatrixView {
    /// Rows `z_i * w_i` from type-1 witnesses `w_i`, with the structural zero
    /// rows of `z`.
    pub fn from_type1(base: ConeVector, type1: &BTreeMap<usize, ConeVector>) -> Self {
        let rows = type1
            .iter()
            .map(|(&i, w)| (i, w.scale(&base.coords[i])))
            .collect();
        let zero_rows = (0..base.dim()).filter(|&i| base.coords[i].is_zero()).collect();
        ProtectionMatrixView { base, rows, zero_rows }
    }

    /// Entry `(i, k)` with index 0 the homogenizing coordinate and variable
    /// `v` at index `v + 1`.
    pub fn entry(&self, i: usize, k: usize) -> Option<Q> {
        let z = &self.base;
        let at = |v: &ConeVector, k: usize| if k == 0 { v.z0.clone() } else { v.coords[k - 1].clone() };
        if i == 0 {
            return Some(at(z, k));
        }
        let var = i - 1;
        if self.zero_rows.contains(&var) {
            return Some(Q::zero());
        }
        if let Some(r) = self.rows.get(&var) {
            return Some(at(r, k));
        }
        z.coords[var].is_one().then(|| at(z, k))
    }

    fn row(&self, var: usize) -> Option<ConeVector> {
        if self.zero_rows.contains(&var) {
            return Some(ConeVector {
                z0: Q::zero(),
                coords: vec![Q::zero(); self.base.dim()],
            });
        }
        self.rows
            .get(&var)
            .cloned()
            .or_else(|| self.base.coords[var].is_one().then(|| self.base.clone()))
    }
}

/// Checks the one-round conditions on a protection matrix: `z0 = 1`,
/// `Y e_0 = diag(Y) = z`, zero and unit rows for integral variables, symmetry,
/// and that both quotient vectors of every fractional variable pass `oracle`.
pub fn protection_matrix_check(
    view: &ProtectionMatrixView,
    oracle: &dyn Fn(&ConeVector) -> Result<bool>,
) -> Result<CheckReport> {
    let z = &view.base;
    let d = z.dim();
    let mut out = Vec::new();
    if !z.z0.is_one() {
        out.push(CheckViolation::new("z0 = 1", vec![0], &z.z0, &Q::one()));
    }
    let mut rows = Vec::with_capacity(d);
    for v in 0..d {
        let zi = &z.coords[v];
        let row = view.row(v).ok_or_else(|| Error::MissingVariable(format!("protection row {v}")))?;
        if zi.is_zero() {
            if let Some((k, c)) = row.coords.iter().enumerate().find(|(_, c)| !c.is_zero()) {
                out.push(CheckViolation::new("zero variable has zero row", vec![v, k], c, &Q::zero()));
            }
            if !row.z0.is_zero() {
                out.push(CheckViolation::new("zero variable has zero row", vec![v], &row.z0, &Q::zero()));
            }
        } else if zi.is_one() && &row != z {
            out.push(CheckViolation::new("unit variable has row z", vec![v], &row.z0, &z.z0));
        }
        if &row.z0 != zi {
            out.push(CheckViolation::new("Y e_0 = z", vec![v], &row.z0, zi));
        }
        if &row.coords[v] != zi {
            out.push(CheckViolation::new("diag(Y) = z", vec![v], &row.coords[v], zi));
        }
        rows.push(row);
    }
    for a in 0..d {
        for b in (a + 1)..d {
            if rows[a].coords[b] != rows[b].coords[a] {
                out.push(CheckViolation::new(
                    "symmetry",
                    vec![a, b],
                    &rows[a].coords[b],
                    &rows[b].coords[a],
                ));
            }
        }
    }
    for (v, row) in rows.iter().enumerate() {
        let zi = &z.coords[v];
        if zi.is_zero() || zi.is_one() {
            continue;
        }
        let w1 = row.scale(&zi.recip());
        if !oracle(&w1)? {
            out.push(CheckViolation::new("type 1 quotient in previous level", vec![v], zi, zi));
        }
        let one_minus = Q::one() - zi;
        let w2 = z.sub(row).scale(&one_minus.recip());
        if !oracle(&w2)? {
            out.push(CheckViolation::new("type 2 quotient in previous level", vec![v], zi, zi));
        }
    }
    Ok(CheckReport::from_violations(out))
}

#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub variable: usize,
    pub type1: Option<ConeVector>,
    pub type2: Option<ConeVector>,
}

impl WitnessPair {
    /// Both witnesses of `variable` read off a protection matrix view.
    pub fn from_view(view: &ProtectionMatrixView, variable: usize) -> Result<Self> {
        let z = &view.base;
        let zi = &z.coords[variable];
        let row = view
            .row(variable)
            .ok_or_else(|| Error::MissingVariable(format!("protection row {variable}")))?;
        Ok(WitnessPair {
            variable,
            type1: (!zi.is_zero()).then(|| row.scale(&zi.recip())),
            type2: (!zi.is_one()).then(|| z.sub(&row).scale(&(Q::one() - zi).recip())),
        })
    }
}

/// Symmetry of a witness family: `z_q * W_q[t] = z_t * W_t[q]` for type-1
/// witnesses, unit self-coordinate in type-1 witnesses, and integral
/// coordinates of `z` copied into every witness.
pub fn symmetry_factor_check(z: &ConeVector, witnesses: &[WitnessPair]) -> Result<CheckReport> {
    let mut out = Vec::new();
    let mut t1: BTreeMap<usize, &ConeVector> = BTreeMap::new();
    for w in witnesses {
        if let Some(v) = &w.type1 {
            t1.insert(w.variable, v);
        }
    }
    for w in witnesses {
        let zi = &z.coords[w.variable];
        if !zi.is_zero() && w.type1.is_none() {
            return Err(Error::MissingVariable(format!("type 1 witness of {}", w.variable)));
        }
        if let Some(v) = &w.type1 {
            if !v.coords[w.variable].is_one() {
                out.push(CheckViolation::new("type 1 self coordinate", vec![w.variable], &v.coords[w.variable], &Q::one()));
            }
        }
        for v in [&w.type1, &w.type2].into_iter().flatten() {
            for (k, zk) in z.coords.iter().enumerate() {
                if (zk.is_zero() || zk.is_one()) && &v.coords[k] != zk {
                    out.push(CheckViolation::new("integral coordinate preserved", vec![w.variable, k], &v.coords[k], zk));
                }
            }
        }
    }
    let keys: Vec<usize> = t1.keys().copied().collect();
    for (a, &q) in keys.iter().enumerate() {
        for &t in &keys[a + 1..] {
            let lhs = &z.coords[q] * &t1[&q].coords[t];
            let rhs = &z.coords[t] * &t1[&t].coords[q];
            if lhs != rhs {
                out.push(CheckViolation::new("witness factor symmetry", vec![q, t], &lhs, &rhs));
            }
        }
    }
    Ok(CheckReport::from_violations(out))
}

/// The type-2 twin of the type-1 witness `type1` for variable `t`:
/// `(z - z_t * type1) / (1 - z_t)`, coordinate-wise.
pub fn twin_type2(z: &ConeVector, type1: &ConeVector, t: usize) -> Result<ConeVector> {
    let zt = &z.coords[t];
    if zt.is_one() {
        return Err(Error::InvalidParameter(format!("variable {t} is 1, no type 2 witness")));
    }
    if type1.dim() != z.dim() {
        return Err(Error::WrongShape("witness and base differ in dimension".into()));
    }
    Ok(z.sub(&type1.scale(zt)).scale(&(Q::one() - zt).recip()))
}

/// Affine expression over LP variables.
#[derive(Clone, Debug, Default)]
struct Affine {
    terms: Vec<(usize, Q)>,
    constant: Q,
}

impl Affine {
    fn constant(c: Q) -> Self {
        Affine { terms: vec![], constant: c }
    }
    fn var(v: usize) -> Self {
        Affine {
            terms: vec![(v, Q::one())],
            constant: Q::zero(),
        }
    }
    fn sub(&self, o: &Affine) -> Affine {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().map(|(v, c)| (*v, -c)));
        Affine {
            terms,
            constant: &self.constant - &o.constant,
        }
    }
}

/// Adds `sum_k coef_k * expr_k REL 0`.
fn add_combination(lp: &mut LinearProgram, parts: &[(Q, &Affine)], rel: Relation) {
    let mut terms = Vec::new();
    let mut constant = Q::zero();
    for (c, e) in parts {
        if c.is_zero() {
            continue;
        }
        terms.extend(e.terms.iter().map(|(v, a)| (*v, a * c)));
        constant += c * &e.constant;
    }
    lp.add_constraint(terms, rel, -constant);
}

/// Requires `(u0, u)` to lie in the cone over `k`.
fn add_cone_constraints(lp: &mut LinearProgram, k: &LinearProgram, u0: &Affine, u: &[Affine]) {
    let one = Q::one();
    add_combination(lp, &[(one.clone(), u0)], Relation::Ge);
    for con in &k.constraints {
        let mut parts: Vec<(Q, &Affine)> = con.coeffs.iter().map(|(v, a)| (a.clone(), &u[*v])).collect();
        parts.push((-con.rhs.clone(), u0));
        add_combination(lp, &parts, con.rel);
    }
    for (v, var) in k.variables.iter().enumerate() {
        if let Some(lo) = &var.lo {
            add_combination(lp, &[(one.clone(), &u[v]), (-lo.clone(), u0)], Relation::Ge);
        }
        if let Some(hi) = &var.hi {
            add_combination(lp, &[(one.clone(), &u[v]), (-hi.clone(), u0)], Relation::Le);
        }
    }
}

/// Requires `(u0, u)` to lie in `N^rounds(cone K)` by nesting the matrix
/// characterization: a symmetric `Y` with `Y e_0 = diag(Y) = u` whose
/// columns `Y e_i` and `Y (e_0 - e_i)` lie one level lower.
fn add_membership(lp: &mut LinearProgram, k: &LinearProgram, u0: &Affine, u: &[Affine], rounds: usize) {
    if rounds == 0 {
        add_cone_constraints(lp, k, u0, u);
        return;
    }
    let n = u.len();
    let mut off: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let base = lp.num_vars();
    for a in 0..n {
        for b in (a + 1)..n {
            let v = lp.add_var(format!("Y{}_{}_{}", base, a, b));
            off.insert((a, b), v);
        }
    }
    let entry = |a: usize, b: usize| -> Affine {
        if a == b {
            u[a].clone()
        } else {
            Affine::var(off[&(a.min(b), a.max(b))])
        }
    };
    for i in 0..n {
        let col: Vec<Affine> = (0..n).map(|b| entry(i, b)).collect();
        let rest: Vec<Affine> = (0..n).map(|b| u[b].sub(&col[b])).collect();
        add_membership(lp, k, &u[i], &col, rounds - 1);
        add_membership(lp, k, &u0.sub(&u[i]), &rest, rounds - 1);
    }
}

/// Dimension limits of the brute-force oracle.
pub const MEMBERSHIP_MAX_DIM_ONE_ROUND: usize = 12;
pub const MEMBERSHIP_MAX_DIM_MULTI_ROUND: usize = 8;
pub const MEMBERSHIP_MAX_ROUNDS: usize = 3;

/// Decides `z in N^rounds(K)` exactly. Round 0 is a feasibility check; each
/// further round introduces a symmetric matrix per vector of the previous
/// level, all in one feasibility LP.
pub fn brute_membership(k: &LinearProgram, z: &ConeVector, rounds: usize) -> Result<bool> {
    let n = k.num_vars();
    if z.dim() != n {
        return Err(Error::WrongShape(format!("point has {} coordinates, K has {n}", z.dim())));
    }
    let limit = if rounds <= 1 {
        MEMBERSHIP_MAX_DIM_ONE_ROUND
    } else {
        MEMBERSHIP_MAX_DIM_MULTI_ROUND
    };
    if rounds > MEMBERSHIP_MAX_ROUNDS || n > limit {
        let need = (2 * n as u128).pow(rounds as u32);
        return Err(budget("membership oracle (dimension, rounds)", need, limit as u128));
    }
    if !z.z0.is_one() {
        return Err(Error::InvalidParameter("membership oracle expects z0 = 1".into()));
    }
    if rounds == 0 {
        return Ok(check_feasible(&z.coords, k)?.feasible);
    }
    let mut lp = LinearProgram::new();
    let u0 = Affine::constant(z.z0.clone());
    let u: Vec<Affine> = z.coords.iter().cloned().map(Affine::constant).collect();
    add_membership(&mut lp, k, &u0, &u, rounds);
    let opts = SolveOptions {
        max_cells: 64_000_000,
        ..SolveOptions::default()
    };
    Ok(solve_lp_with(&lp, opts)?.status == LpStatus::Optimal)
}

/// Outcome of the protection-matrix existence oracle.
#[derive(Clone, Debug)]
pub struct ProtectionSearch {
    pub exists: bool,
    pub view: Option<ProtectionMatrixView>,
    pub check: Option<CheckReport>,
}

/// Searches for a one-round protection matrix in the hyperplane form: rows of
/// integral variables are forced, every fractional row must satisfy
/// `Y_i / z_i in K` and `(z - Y_i) / (1 - z_i) in K`, and `z` itself must
/// lie in `K`. A found matrix is re-verified by [`protection_matrix_check`].
pub fn protection_matrix_search(k: &LinearProgram, z: &ConeVector) -> Result<ProtectionSearch> {
    let n = k.num_vars();
    if z.dim() != n || !z.z0.is_one() {
        return Err(Error::WrongShape("expects a point of K's dimension with z0 = 1".into()));
    }
    let none = ProtectionSearch {
        exists: false,
        view: None,
        check: None,
    };
    if !check_feasible(&z.coords, k)?.feasible {
        return Ok(none);
    }
    let frac: Vec<usize> = (0..n).filter(|&i| !z.coords[i].is_zero() && !z.coords[i].is_one()).collect();
    let mut lp = LinearProgram::new();
    let mut off: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (p, &a) in frac.iter().enumerate() {
        for &b in &frac[p + 1..] {
            off.insert((a, b), lp.add_var(format!("Y{a}_{b}")));
        }
    }
    let entry = |a: usize, b: usize| -> Affine {
        let (za, zb) = (&z.coords[a], &z.coords[b]);
        if a == b {
            Affine::constant(za.clone())
        } else if za.is_zero() || zb.is_zero() {
            Affine::constant(Q::zero())
        } else if za.is_one() {
            Affine::constant(zb.clone())
        } else if zb.is_one() {
            Affine::constant(za.clone())
        } else {
            Affine::var(off[&(a.min(b), a.max(b))])
        }
    };
    for &i in &frac {
        let zi = &z.coords[i];
        let row: Vec<Affine> = (0..n).map(|b| entry(i, b)).collect();
        let rest: Vec<Affine> = (0..n).map(|b| Affine::constant(z.coords[b].clone()).sub(&row[b])).collect();
        add_cone_constraints(&mut lp, k, &Affine::constant(zi.clone()), &row);
        add_cone_constraints(&mut lp, k, &Affine::constant(Q::one() - zi), &rest);
    }
    let sol = solve_lp_with(&lp, SolveOptions::default())?;
    if sol.status != LpStatus::Optimal {
        return Ok(none);
    }
    let val = |a: usize, b: usize| -> Q {
        let e = entry(a, b);
        e.terms.iter().fold(e.constant.clone(), |acc, (v, c)| acc + c * &sol.values[*v])
    };
    let rows: BTreeMap<usize, ConeVector> = frac
        .iter()
        .map(|&i| {
            (
                i,
                ConeVector {
                    z0: z.coords[i].clone(),
                    coords: (0..n).map(|b| val(i, b)).collect(),
                },
            )
        })
        .collect();
    let view = ProtectionMatrixView {
        base: z.clone(),
        rows,
        zero_rows: (0..n).filter(|&i| z.coords[i].is_zero()).collect(),
    };
    let oracle = |w: &ConeVector| Ok(check_feasible(&w.coords, k)?.feasible);
    let check = protection_matrix_check(&view, &oracle)?;
    Ok(ProtectionSearch {
        exists: check.passed,
        view: Some(view),
        check: Some(check),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PsdReport {
    pub psd: bool,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub pivots: Vec<Q>,
}

/// Exact symmetric LDL^T with diagonal pivoting; PSD iff every pivot is
/// nonnegative and zero pivots have zero remaining rows.
pub fn ldlt_psd(mut a: Vec<Vec<Q>>) -> PsdReport {
    let n = a.len();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::with_capacity(n);
    while !alive.is_empty() {
        let (pos, &p) = alive
            .iter()
            .enumerate()
            .max_by(|x, y| a[*x.1][*x.1].cmp(&a[*y.1][*y.1]))
            .expect("nonempty");
        let d = a[p][p].clone();
        alive.remove(pos);
        if d.is_negative() {
            pivots.push(d);
            return PsdReport { psd: false, pivots };
        }
        if d.is_zero() {
            let clean = alive.iter().all(|&k| a[p][k].is_zero());
            pivots.push(d);
            if !clean {
                return PsdReport { psd: false, pivots };
            }
            continue;
        }
        for &r in &alive {
            if a[r][p].is_zero() {
                continue;
            }
            let f = &a[r][p] / &d;
            for &c in &alive {
                if !a[p][c].is_zero() {
                    let delta = &f * &a[p][c];
                    a[r][c] -= delta;
                }
            }
        }
        pivots.push(d);
    }
    PsdReport { psd: true, pivots }
}

/// The LS+ restriction matrix `y y^T + Diag(y - y^2)`.
pub fn diagonal_lift(y: &[Q]) -> Vec<Vec<Q>> {
    let n = y.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| if i == k { y[i].clone() } else { &y[i] * &y[k] })
                .collect()
        })
        .collect()
}

/// PSD test of `y y^T + Diag(y - y^2)` for `y` in `[0,1]^n`.
pub fn psd_restriction_check(y: &[Q]) -> Result<PsdReport> {
    if let Some(v) = y.iter().find(|v| v.is_negative() || *v > &Q::one()) {
        return Err(Error::InvalidParameter(format!("entry {} outside [0,1]", fmt_q(v))));
    }
    Ok(ldlt_psd(diagonal_lift(y)))
}

/// Standard relaxation of a two-facility, two-client CFL instance with
/// `U = 2` and zero costs: six variables `y0 y1 x0_0 x0_1 x1_0 x1_1`.
pub fn micro_cfl_polytope() -> LinearProgram {
    use crate::instances::{ConnectionCosts, FacilityLocationInstance, Mode};
    let inst = FacilityLocationInstance {
        mode: Mode::Cfl,
        n_facilities: 2,
        n_clients: 2,
        opening_cost: vec![Q::zero(); 2],
        connection_cost: ConnectionCosts::uniform(Q::zero()),
        capacity_or_bound: 2,
        metric: true,
    };
    crate::relaxations::standard_lp(&inst)
}

/// Grid over `(y0, y1, x0_0, x0_1)` of the micro polytope with spacing
/// `1/steps`; the remaining coordinates are set by client coverage.
pub fn micro_grid(steps: u32) -> Vec<ConeVector> {
    let vals: Vec<Q> = (0..=steps).map(|k| Q::new((k as i64).into(), (steps as i64).into())).collect();
    let mut out = Vec::new();
    for y0 in &vals {
        for y1 in &vals {
            for a in &vals {
                for b in &vals {
                    let one = Q::one();
                    out.push(ConeVector::point(vec![
                        y0.clone(),
                        y1.clone(),
                        a.clone(),
                        b.clone(),
                        &one - a,
                        &one - b,
                    ]));
                }
            }
        }
    }
    out
}

/// Points of `{0,1}^n` inside `K`.
pub fn integral_points(k: &LinearProgram) -> Result<Vec<ConeVector>> {
    let n = k.num_vars();
    if n > 20 {
        return Err(budget("integral points", 1u128 << n, 1 << 20));
    }
    let mut out = Vec::new();
    for mask in 0u64..1 << n {
        let coords: Vec<Q> = (0..n).map(|i| if mask >> i & 1 == 1 { Q::one() } else { Q::zero() }).collect();
        if check_feasible(&coords, k)?.feasible {
            out.push(ConeVector::point(coords));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub points: usize,
    pub members: usize,
    pub in_k: usize,
    pub agreements: usize,
    /// Points where the two oracles disagree, as `p/q` coordinate lists.
    pub disagreements: Vec<Vec<String>>,
    pub all_agree: bool,
}

/// Compares [`brute_membership`] at one round with
/// [`protection_matrix_search`] on every point.
pub fn oracle_crosscheck(k: &LinearProgram, points: &[ConeVector]) -> Result<CrosscheckReport> {
    let mut r = CrosscheckReport {
        points: points.len(),
        members: 0,
        in_k: 0,
        agreements: 0,
        disagreements: Vec::new(),
        all_agree: true,
    };
    for z in points {
        if check_feasible(&z.coords, k)?.feasible {
            r.in_k += 1;
        }
        let brute = brute_membership(k, z, 1)?;
        let search = protection_matrix_search(k, z)?.exists;
        if brute {
            r.members += 1;
        }
        if brute == search {
            r.agreements += 1;
        } else {
            r.disagreements.push(z.coords.iter().map(fmt_q).collect());
        }
    }
    r.all_agree = r.disagreements.is_empty();
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    /// The segment `0 <= a <= 1`, `b = 1 - a` in the plane.
    fn segment() -> LinearProgram {
        let mut k = LinearProgram::new();
        let a = k.add_var_bounded("a", Some(qi(0)), Some(qi(1)));
        let b = k.add_var_bounded("b", Some(qi(0)), Some(qi(1)));
        k.add_constraint(vec![(a, qi(1)), (b, qi(1))], Relation::Eq, qi(1));
        k
    }

    #[test]
    fn twin_formula() {
        let z = ConeVector::point(vec![q(1, 2), q(1, 3)]);
        let t1 = ConeVector::point(vec![qi(1), q(1, 3) * q(11, 10)]);
        let tw = twin_type2(&z, &t1, 0).unwrap();
        assert_eq!(tw.coords[0], qi(0));
        assert_eq!(tw.coords[1], q(1, 3) * q(9, 10));
        assert_eq!(tw.z0, qi(1));
        let back = t1.scale(&q(1, 2)).add(&tw.scale(&q(1, 2)));
        assert_eq!(back, z);
    }

    #[test]
    fn integral_point_has_outer_product_matrix() {
        let k = segment();
        let z = ConeVector::point(vec![qi(1), qi(0)]);
        let view = ProtectionMatrixView {
            base: z.clone(),
            rows: BTreeMap::new(),
            zero_rows: [1].into_iter().collect(),
        };
        let oracle = |w: &ConeVector| Ok(check_feasible(&w.coords, &k)?.feasible);
        assert!(protection_matrix_check(&view, &oracle).unwrap().passed);
        for r in 0..=2 {
            assert!(brute_membership(&k, &z, r).unwrap());
        }
    }

    #[test]
    fn segment_midpoint_survives() {
        // The segment is integral, so every point survives.
        let k = segment();
        let z = ConeVector::point(vec![q(1, 2), q(1, 2)]);
        assert!(brute_membership(&k, &z, 1).unwrap());
        assert!(brute_membership(&k, &z, 2).unwrap());
        assert!(protection_matrix_search(&k, &z).unwrap().exists);
        let out = ConeVector::point(vec![q(1, 2), q(1, 3)]);
        assert!(!brute_membership(&k, &out, 0).unwrap());
        assert!(!brute_membership(&k, &out, 1).unwrap());
        assert!(!protection_matrix_search(&k, &out).unwrap().exists);
    }

    #[test]
    fn triangle_cut_removes_center() {
        // Edge constraints of a triangle: one round already enforces the
        // odd-cycle inequality x0 + x1 + x2 <= 1.
        let mut k = LinearProgram::new();
        let v: Vec<usize> = (0..3).map(|i| k.add_var_bounded(format!("x{i}"), Some(qi(0)), Some(qi(1)))).collect();
        for a in 0..3 {
            for b in (a + 1)..3 {
                k.add_constraint(vec![(v[a], qi(1)), (v[b], qi(1))], Relation::Le, qi(1));
            }
        }
        let z = ConeVector::point(vec![q(1, 2); 3]);
        assert!(brute_membership(&k, &z, 0).unwrap());
        assert!(!brute_membership(&k, &z, 1).unwrap());
        assert!(!protection_matrix_search(&k, &z).unwrap().exists);
        let inside = ConeVector::point(vec![q(1, 3); 3]);
        assert!(brute_membership(&k, &inside, 1).unwrap());
        assert!(protection_matrix_search(&k, &inside).unwrap().exists);
    }

    #[test]
    fn symmetry_check_reports_pair() {
        let z = ConeVector::point(vec![q(1, 2), q(1, 4)]);
        let w0 = ConeVector::point(vec![qi(1), q(1, 4) * q(6, 5)]);
        let w1 = ConeVector::point(vec![q(1, 2) * q(6, 5), qi(1)]);
        let pairs = vec![
            WitnessPair { variable: 0, type1: Some(w0.clone()), type2: None },
            WitnessPair { variable: 1, type1: Some(w1), type2: None },
        ];
        assert!(symmetry_factor_check(&z, &pairs).unwrap().passed);
        let bad = vec![
            WitnessPair { variable: 0, type1: Some(w0), type2: None },
            WitnessPair { variable: 1, type1: Some(ConeVector::point(vec![q(1, 2), qi(1)])), type2: None },
        ];
        let r = symmetry_factor_check(&z, &bad).unwrap();
        assert!(!r.passed);
        assert_eq!(r.violations[0].indices, vec![0, 1]);
    }

    #[test]
    fn micro_oracles_agree_on_coarse_grid() {
        let k = micro_cfl_polytope();
        let r = oracle_crosscheck(&k, &micro_grid(2)).unwrap();
        assert_eq!(r.points, 81);
        assert!(r.all_agree, "{:?}", r.disagreements);
        assert!(r.members > 0 && r.members <= r.in_k);
        let verts = integral_points(&k).unwrap();
        assert_eq!(verts.len(), 6);
        assert!(brute_membership(&k, &verts[0], 2).unwrap());
    }

    #[test]
    fn psd_examples() {
        assert!(psd_restriction_check(&[qi(0), qi(0)]).unwrap().psd);
        let r = psd_restriction_check(&[q(1, 2)]).unwrap();
        assert!(r.psd);
        assert_eq!(r.pivots, vec![q(1, 2)]);
        assert!(psd_restriction_check(&[q(3, 2)]).is_err());
        let not_psd = vec![vec![qi(1), qi(2)], vec![qi(2), qi(1)]];
        assert!(!ldlt_psd(not_psd).psd);
        let zero_diag = vec![vec![qi(0), qi(1)], vec![qi(1), qi(1)]];
        assert!(!ldlt_psd(zero_diag).psd);
    }
}
