//! Dense two-phase primal simplex with Bland's rule.
//!
//! The program is brought to canonical form `min c'x', A'x' = b', x' >= 0,
//! b' >= 0` by shifting lower bounds, mirroring upper-only variables,
//! splitting free variables and turning finite upper bounds into rows.
//! Every row starts with a unit basis column (slack or artificial); those
//! columns are kept for the whole run so that `B^-1` can be read off the
//! final tableau and a dual vector extracted.

use std::fmt::Debug;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{budget, Result};
use crate::lp::{LinearProgram, Relation};
use crate::rational::Q;

/// Field operations the tableau needs.
pub trait Scalar: Clone + Debug {
    fn nil() -> Self;
    fn from_q(v: &Q) -> Self;
    fn to_q(&self) -> Q;
    fn near_zero(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn lt(&self, o: &Self) -> bool;
    fn eq_s(&self, o: &Self) -> bool;
}

impl Scalar for Q {
    fn nil() -> Self {
        Zero::zero()
    }
    fn from_q(v: &Q) -> Self {
        v.clone()
    }
    fn to_q(&self) -> Q {
        self.clone()
    }
    fn near_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn lt(&self, o: &Self) -> bool {
        self < o
    }
    fn eq_s(&self, o: &Self) -> bool {
        self == o
    }
}

/// Tolerance of the floating-point fast mode.
pub const FAST_TOL: f64 = 1e-9;

impl Scalar for f64 {
    fn nil() -> Self {
        0.0
    }
    fn from_q(v: &Q) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }
    fn to_q(&self) -> Q {
        Q::from_float(*self).unwrap_or_else(Zero::zero)
    }
    fn near_zero(&self) -> bool {
        self.abs() <= FAST_TOL
    }
    fn is_pos(&self) -> bool {
        *self > FAST_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -FAST_TOL
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn lt(&self, o: &Self) -> bool {
        *self < *o - FAST_TOL
    }
    fn eq_s(&self, o: &Self) -> bool {
        (self - o).abs() <= FAST_TOL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RawStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct RawSolution {
    pub status: RawStatus,
    /// Values of the original variables.
    pub values: Vec<Q>,
    /// Dual multipliers of the original constraints.
    pub duals: Vec<Q>,
    pub pivots: usize,
}

#[derive(Clone, Debug)]
enum VarMap {
    /// x = lo + x'
    Shift { col: usize, lo: Q },
    /// x = hi - x'
    Mirror { col: usize, hi: Q },
    /// x = x+ - x-
    Split { pos: usize, neg: usize },
}

struct Canonical {
    /// Sparse rows over structural columns, followed by a slack column or none.
    rows: Vec<Vec<(usize, Q)>>,
    rhs: Vec<Q>,
    /// Column of the unit basis vector that starts each row.
    unit_col: Vec<usize>,
    /// Rows whose starting column is an artificial.
    artificial: Vec<bool>,
    /// Sign applied to the row (original row index, sign); upper-bound rows map to None.
    origin: Vec<Option<(usize, bool)>>,
    cost: Vec<Q>,
    ncols: usize,
    maps: Vec<VarMap>,
}

fn canonicalize(lp: &LinearProgram) -> Canonical {
    let mut maps = Vec::with_capacity(lp.num_vars());
    let mut ncols = 0usize;
    let mut ub_rows: Vec<(usize, Q)> = Vec::new();
    for v in &lp.variables {
        match (&v.lo, &v.hi) {
            (Some(lo), hi) => {
                maps.push(VarMap::Shift { col: ncols, lo: lo.clone() });
                if let Some(hi) = hi {
                    ub_rows.push((ncols, hi - lo));
                }
                ncols += 1;
            }
            (None, Some(hi)) => {
                maps.push(VarMap::Mirror { col: ncols, hi: hi.clone() });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }
    let n_struct = ncols;
    let mut cost = vec![Q::zero(); n_struct];
    for (v, c) in &lp.objective {
        match &maps[*v] {
            VarMap::Shift { col, .. } => cost[*col] += c,
            VarMap::Mirror { col, .. } => cost[*col] -= c,
            VarMap::Split { pos, neg } => {
                cost[*pos] += c;
                cost[*neg] -= c;
            }
        }
    }

    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut rels = Vec::new();
    let mut origin = Vec::new();
    for (k, con) in lp.constraints.iter().enumerate() {
        let mut row = Vec::with_capacity(con.coeffs.len() + 1);
        let mut b = con.rhs.clone();
        for (v, a) in &con.coeffs {
            match &maps[*v] {
                VarMap::Shift { col, lo } => {
                    row.push((*col, a.clone()));
                    b -= a * lo;
                }
                VarMap::Mirror { col, hi } => {
                    row.push((*col, -a));
                    b -= a * hi;
                }
                VarMap::Split { pos, neg } => {
                    row.push((*pos, a.clone()));
                    row.push((*neg, -a));
                }
            }
        }
        rows.push(row);
        rhs.push(b);
        rels.push(con.rel);
        origin.push(Some((k, false)));
    }
    for (col, cap) in ub_rows {
        rows.push(vec![(col, Q::from_integer(1.into()))]);
        rhs.push(cap);
        rels.push(Relation::Le);
        origin.push(None);
    }

    let one = Q::from_integer(1.into());
    let mut unit_col = vec![0; rows.len()];
    let mut artificial = vec![false; rows.len()];
    for i in 0..rows.len() {
        let slack = match rels[i] {
            Relation::Le => Some(one.clone()),
            Relation::Ge => Some(-one.clone()),
            Relation::Eq => None,
        };
        let flip = rhs[i].is_negative();
        if flip {
            for (_, a) in rows[i].iter_mut() {
                *a = -a.clone();
            }
            rhs[i] = -rhs[i].clone();
            if let Some((k, _)) = origin[i] {
                origin[i] = Some((k, true));
            }
        }
        if let Some(s) = slack {
            let s = if flip { -s } else { s };
            let col = ncols;
            ncols += 1;
            let unit = s.is_positive();
            rows[i].push((col, s));
            if unit {
                unit_col[i] = col;
                continue;
            }
        }
        unit_col[i] = ncols;
        artificial[i] = true;
        ncols += 1;
    }
    cost.resize(ncols, Q::zero());
    Canonical {
        rows,
        rhs,
        unit_col,
        artificial,
        origin,
        cost,
        ncols,
        maps,
    }
}

struct Tableau<S: Scalar> {
    t: Vec<Vec<S>>,
    /// Reduced costs, last entry is minus the objective value.
    z: Vec<S>,
    basis: Vec<usize>,
    ncols: usize,
    pivots: usize,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        let nz: Vec<usize> = (0..=self.ncols).filter(|&j| !self.t[r][j].near_zero()).collect();
        for &j in &nz {
            self.t[r][j] = self.t[r][j].div(&p);
        }
        self.t[r][c] = one_like::<S>();
        let prow: Vec<(usize, S)> = nz.iter().map(|&j| (j, self.t[r][j].clone())).collect();
        for i in 0..self.t.len() {
            if i == r {
                continue;
            }
            let f = self.t[i][c].clone();
            if f.near_zero() {
                continue;
            }
            let row = &mut self.t[i];
            for (j, v) in &prow {
                row[*j] = row[*j].sub(&f.mul(v));
            }
            row[c] = S::nil();
        }
        let f = self.z[c].clone();
        if !f.near_zero() {
            for (j, v) in &prow {
                self.z[*j] = self.z[*j].sub(&f.mul(v));
            }
            self.z[c] = S::nil();
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Runs Bland's rule over the columns allowed by `allowed`.
    /// Returns false when the program is unbounded.
    fn optimize(&mut self, allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let Some(c) = (0..self.ncols).find(|&j| allowed(j) && self.z[j].is_neg()) else {
                return true;
            };
            let mut best: Option<(usize, S)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][c];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.t[i][self.ncols].div(a);
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio.lt(&br) || (ratio.eq_s(&br) && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// `pi_i = c_B B^-1 e_i`, read from the starting unit column of row `i`,
/// mapped back to the sign convention of the original constraint.
fn extract_duals<S: Scalar>(
    can: &Canonical,
    tab: &Tableau<S>,
    cost: &dyn Fn(usize) -> S,
    n_orig: usize,
) -> Vec<Q> {
    let m = can.rows.len();
    let mut duals = vec![Q::zero(); n_orig];
    for i in 0..m {
        let Some((k, flipped)) = can.origin[i] else {
            continue;
        };
        let uc = can.unit_col[i];
        let mut pi = S::nil();
        for r in 0..m {
            let cb = cost(tab.basis[r]);
            if !cb.near_zero() && !tab.t[r][uc].near_zero() {
                pi = pi.add(&cb.mul(&tab.t[r][uc]));
            }
        }
        let pi = pi.to_q();
        duals[k] = if flipped { -pi } else { pi };
    }
    duals
}

fn one_like<S: Scalar>() -> S {
    S::from_q(&Q::from_integer(1.into()))
}

/// Solves `lp` with scalar type `S`. `max_cells` caps the dense tableau size.
pub fn simplex<S: Scalar>(lp: &LinearProgram, max_cells: u128) -> Result<RawSolution> {
    lp.validate()?;
    let can = canonicalize(lp);
    let m = can.rows.len();
    let cells = (m as u128 + 1) * (can.ncols as u128 + 1);
    if cells > max_cells {
        return Err(budget("simplex tableau cells", cells, max_cells));
    }
    let ncols = can.ncols;
    let mut t = vec![vec![S::nil(); ncols + 1]; m];
    for i in 0..m {
        for (j, a) in &can.rows[i] {
            t[i][*j] = t[i][*j].add(&S::from_q(a));
        }
        t[i][can.unit_col[i]] = one_like::<S>();
        t[i][ncols] = S::from_q(&can.rhs[i]);
    }
    let is_art: Vec<bool> = {
        let mut v = vec![false; ncols];
        for i in 0..m {
            if can.artificial[i] {
                v[can.unit_col[i]] = true;
            }
        }
        v
    };
    let mut tab = Tableau {
        t,
        z: vec![S::nil(); ncols + 1],
        basis: can.unit_col.clone(),
        ncols,
        pivots: 0,
    };

    if can.artificial.iter().any(|a| *a) {
        for i in 0..m {
            if !can.artificial[i] {
                continue;
            }
            for j in 0..=ncols {
                if j == ncols || !is_art[j] {
                    tab.z[j] = tab.z[j].sub(&tab.t[i][j]);
                }
            }
        }
        tab.optimize(&|_| true);
        if tab.z[ncols].is_neg() {
            let unit = one_like::<S>();
            let phase1_cost = |c: usize| if is_art[c] { unit.clone() } else { S::nil() };
            let duals = extract_duals(&can, &tab, &phase1_cost, lp.constraints.len());
            return Ok(RawSolution {
                status: RawStatus::Infeasible,
                values: vec![],
                duals,
                pivots: tab.pivots,
            });
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if !is_art[tab.basis[r]] {
                continue;
            }
            if let Some(c) = (0..ncols).find(|&j| !is_art[j] && !tab.t[r][j].near_zero()) {
                tab.pivot(r, c);
            }
        }
    }

    // Phase two with the true costs.
    let cost: Vec<S> = can.cost.iter().map(S::from_q).collect();
    let mut z: Vec<S> = cost.clone();
    z.push(S::nil());
    for r in 0..m {
        let cb = &cost[tab.basis[r]];
        if cb.near_zero() {
            continue;
        }
        for j in 0..=ncols {
            if !tab.t[r][j].near_zero() {
                z[j] = z[j].sub(&cb.mul(&tab.t[r][j]));
            }
        }
    }
    tab.z = z;
    if !tab.optimize(&|j| !is_art[j]) {
        return Ok(RawSolution {
            status: RawStatus::Unbounded,
            values: vec![],
            duals: vec![],
            pivots: tab.pivots,
        });
    }

    let mut col_val = vec![Q::zero(); ncols];
    for r in 0..m {
        col_val[tab.basis[r]] = tab.t[r][ncols].to_q();
    }
    let values = can
        .maps
        .iter()
        .map(|mp| match mp {
            VarMap::Shift { col, lo } => lo + &col_val[*col],
            VarMap::Mirror { col, hi } => hi - &col_val[*col],
            VarMap::Split { pos, neg } => &col_val[*pos] - &col_val[*neg],
        })
        .collect();

    let duals = extract_duals(&can, &tab, &|c| cost[c].clone(), lp.constraints.len());
    Ok(RawSolution {
        status: RawStatus::Optimal,
        values,
        duals,
        pivots: tab.pivots,
    })
}

/// Exactly checks a dual certificate for a minimization LP and returns the
/// dual objective when valid.
///
/// Each constraint multiplier must carry the right sign (`<=` nonpositive,
/// `>=` nonnegative); the induced reduced cost `d_v = c_v - sum_k y_k a_kv`
/// may be positive only for variables with a finite lower bound and negative
/// only for variables with a finite upper bound. The returned bound is then a
/// valid lower bound on every feasible objective value.
pub fn dual_bound(lp: &LinearProgram, duals: &[Q]) -> Option<Q> {
    if duals.len() != lp.constraints.len() {
        return None;
    }
    let mut d = vec![Q::zero(); lp.num_vars()];
    for (v, c) in &lp.objective {
        d[*v] += c;
    }
    let mut bound = Q::zero();
    for (con, y) in lp.constraints.iter().zip(duals) {
        let ok = match con.rel {
            Relation::Le => !y.is_positive(),
            Relation::Ge => !y.is_negative(),
            Relation::Eq => true,
        };
        if !ok {
            return None;
        }
        if y.is_zero() {
            continue;
        }
        for (v, a) in &con.coeffs {
            d[*v] -= y * a;
        }
        bound += y * &con.rhs;
    }
    for (var, dv) in lp.variables.iter().zip(&d) {
        if dv.is_positive() {
            bound += dv * var.lo.as_ref()?;
        } else if dv.is_negative() {
            bound += dv * var.hi.as_ref()?;
        }
    }
    Some(bound)
}

/// Checks a Farkas-type infeasibility certificate: multipliers with the dual
/// sign pattern whose induced reduced costs against a zero objective give a
/// strictly positive bound.
pub fn infeasibility_bound(lp: &LinearProgram, duals: &[Q]) -> Option<Q> {
    let mut zero_obj = lp.clone();
    zero_obj.objective.clear();
    dual_bound(&zero_obj, duals).filter(|b| b.is_positive())
}
