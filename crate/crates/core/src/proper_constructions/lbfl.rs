//! Lower-bounded construction: two rounds of admissible classes whose
//! combination nearly opens every simplex facility while leaving it short of
//! its lower bound.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{check_nc, ExclusiveSets, RoundMeasures};
use crate::error::{budget, Error, Result};
use crate::instances::{lbfl_gap_geometry, LabeledInstance, Mode};
use crate::rational::{fmt_q, qu, serde_exact, Q};
use crate::relaxations::{standard_lp, YxSolution};
use crate::solver::{check_feasible, integral_optimum, GapReport};

/// Per-unit-measure marginals of one round, by role.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RoundFractions {
    pub round: String,
    /// `y` of each simplex facility.
    #[serde(with = "serde_exact")]
    pub y_simplex: Q,
    /// `y` of each far facility.
    #[serde(with = "serde_exact")]
    pub y_far: Q,
    /// Simplex facility to one of its exclusive clients.
    #[serde(with = "serde_exact")]
    pub own: Q,
    /// Simplex facility to an exclusive client of another simplex facility.
    #[serde(with = "serde_exact")]
    pub cross: Q,
    /// Far facility to a shared client.
    #[serde(with = "serde_exact")]
    pub far: Q,
    /// Every other (facility, client) pair.
    #[serde(with = "serde_exact")]
    pub other: Q,
}

/// Closed-form fractions of Round A (one far facility, `n-c-1` simplex
/// facilities) and Round B (`n-c` simplex facilities).
pub fn lbfl_round_fractions(n: usize, c: usize) -> Result<(RoundFractions, RoundFractions)> {
    check_nc(n, c)?;
    let (n, c) = (qu(n as u64), qu(c as u64));
    let one = Q::one();
    let n2 = &n * &n;
    let denom = (&n - &one) * (&n - qu(2)) * (&n2 - &one);
    let a_share = (&n - &c - &one) / (&n - &one);
    let b_share = (&n - &c) / (&n - &one);
    let a = RoundFractions {
        round: "A".into(),
        y_simplex: a_share.clone(),
        y_far: Q::new(1.into(), 2.into()),
        own: a_share,
        cross: (&n - &c - &one) / &denom,
        far: &n2 / (qu(2) * (&n2 + &n - &one)),
        other: Q::zero(),
    };
    let b = RoundFractions {
        round: "B".into(),
        y_simplex: b_share.clone(),
        y_far: Q::zero(),
        own: b_share,
        cross: (&n - &c) / &denom,
        far: Q::zero(),
        other: Q::zero(),
    };
    Ok((a, b))
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u128, |r, t| r.saturating_mul(n - t) / (t + 1))
}

fn falling(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |r, t| r.saturating_mul(n - t))
}

/// Number of admissible classes of type A and type B.
pub fn lbfl_class_counts(n: usize, c: usize) -> Result<(u128, u128)> {
    check_nc(n, c)?;
    let (n, c) = (n as u128, c as u128);
    let b = n * n;
    let a = 2 * binom(n - 1, n - c - 1) * falling(c * (b - 1), n - c - 1) * binom(b + n - 1, b);
    let bb = binom(n - 1, n - c) * falling((c - 1) * (b - 1), n - c);
    Ok((a, bb))
}

/// Fractions observed by enumerating every admissible class of both rounds
/// with uniform measure.
#[derive(Clone, Debug, Serialize)]
pub struct EnumeratedRounds {
    pub n: usize,
    pub c: usize,
    pub type_a_classes: u64,
    pub type_b_classes: u64,
    pub a: RoundFractions,
    pub b: RoundFractions,
    /// Roles whose enumerated values were not all equal.
    pub nonuniform_roles: Vec<String>,
    /// Roles where enumeration and closed form differ.
    pub mismatches: Vec<String>,
    pub matches_closed_form: bool,
}

struct Tally {
    classes: u64,
    y: Vec<u64>,
    x: Vec<Vec<u64>>,
}

impl Tally {
    fn new(facilities: usize, clients: usize) -> Self {
        Tally {
            classes: 0,
            y: vec![0; facilities],
            x: vec![vec![0; clients]; facilities],
        }
    }

    fn record(&mut self, parts: &[(usize, &[usize])]) {
        self.classes += 1;
        for &(i, clients) in parts {
            self.y[i] += 1;
            for &j in clients {
                self.x[i][j] += 1;
            }
        }
    }
}

fn combinations(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        let need = k - cur.len();
        for p in start..=items.len().saturating_sub(need) {
            cur.push(items[p]);
            rec(items, k, p + 1, cur, f);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

fn injections(k: usize, cand: &[usize], f: &mut dyn FnMut(&[usize])) {
    fn rec(k: usize, cand: &[usize], used: &mut [bool], cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for p in 0..cand.len() {
            if !used[p] {
                used[p] = true;
                cur.push(cand[p]);
                rec(k, cand, used, cur, f);
                cur.pop();
                used[p] = false;
            }
        }
    }
    rec(k, cand, &mut vec![false; cand.len()], &mut Vec::with_capacity(k), f);
}

/// Simplex part of a class: each facility in `present` keeps its exclusive
/// block and takes one extra client from the blocks of absent facilities.
fn for_each_simplex_part(sets: &ExclusiveSets, size: usize, f: &mut dyn FnMut(&[Vec<usize>], &[usize])) {
    let simplex: Vec<usize> = (0..sets.exclusive.len()).collect();
    combinations(&simplex, size, &mut |present| {
        let cand: Vec<usize> = simplex
            .iter()
            .filter(|i| !present.contains(i))
            .flat_map(|&i| sets.exclusive[i].clone())
            .collect();
        injections(present.len(), &cand, &mut |extra| {
            let blocks: Vec<Vec<usize>> = present
                .iter()
                .zip(extra)
                .map(|(&i, &e)| sets.exclusive[i].clone().chain([e]).collect())
                .collect();
            f(&blocks, present);
        });
    });
}

/// Literal enumeration of all admissible classes of both rounds. Refuses
/// when the total class count exceeds `class_budget`.
pub fn enumerate_round_fractions(n: usize, c: usize, class_budget: u128) -> Result<EnumeratedRounds> {
    let (count_a, count_b) = lbfl_class_counts(n, c)?;
    let total = count_a.saturating_add(count_b);
    if total > class_budget {
        return Err(budget("admissible classes", total, class_budget));
    }
    let sets = ExclusiveSets::new(n);
    sets.check()?;
    let (facilities, clients) = (n + 1, sets.n_clients());
    let shared: Vec<usize> = sets.shared.clone().collect();

    let mut ta = Tally::new(facilities, clients);
    for far in [n - 1, n] {
        for_each_simplex_part(&sets, n - c - 1, &mut |blocks, present| {
            combinations(&shared, sets.bound, &mut |far_block| {
                let mut parts: Vec<(usize, &[usize])> =
                    present.iter().zip(blocks).map(|(&i, b)| (i, b.as_slice())).collect();
                parts.push((far, far_block));
                ta.record(&parts);
            });
        });
    }
    let mut tb = Tally::new(facilities, clients);
    for_each_simplex_part(&sets, n - c, &mut |blocks, present| {
        let parts: Vec<(usize, &[usize])> = present.iter().zip(blocks).map(|(&i, b)| (i, b.as_slice())).collect();
        tb.record(&parts);
    });
    if ta.classes as u128 != count_a || tb.classes as u128 != count_b {
        return Err(Error::Construction(format!(
            "enumerated {} / {} classes, expected {count_a} / {count_b}",
            ta.classes, tb.classes
        )));
    }

    let mut nonuniform = Vec::new();
    let a = summarize("A", &ta, &sets, &mut nonuniform);
    let b = summarize("B", &tb, &sets, &mut nonuniform);
    let (ca, cb) = lbfl_round_fractions(n, c)?;
    let mut mismatches = Vec::new();
    for (got, want) in [(&a, &ca), (&b, &cb)] {
        for (role, g, w) in roles(got, want) {
            if g != w {
                mismatches.push(format!("round {} {role}: enumerated {}, closed form {}", got.round, fmt_q(g), fmt_q(w)));
            }
        }
    }
    Ok(EnumeratedRounds {
        n,
        c,
        type_a_classes: ta.classes,
        type_b_classes: tb.classes,
        a,
        b,
        matches_closed_form: mismatches.is_empty() && nonuniform.is_empty(),
        nonuniform_roles: nonuniform,
        mismatches,
    })
}

fn roles<'a>(g: &'a RoundFractions, w: &'a RoundFractions) -> [(&'static str, &'a Q, &'a Q); 6] {
    [
        ("y_simplex", &g.y_simplex, &w.y_simplex),
        ("y_far", &g.y_far, &w.y_far),
        ("own", &g.own, &w.own),
        ("cross", &g.cross, &w.cross),
        ("far", &g.far, &w.far),
        ("other", &g.other, &w.other),
    ]
}

fn summarize(round: &str, t: &Tally, sets: &ExclusiveSets, nonuniform: &mut Vec<String>) -> RoundFractions {
    let n = sets.n;
    let mut seen: BTreeMap<&str, Vec<u64>> = BTreeMap::new();
    for i in 0..=n {
        let key = if i < n - 1 { "y_simplex" } else { "y_far" };
        seen.entry(key).or_default().push(t.y[i]);
        for j in 0..sets.n_clients() {
            let role = match (i < n - 1, sets.owner(j)) {
                (true, Some(o)) if o == i => "own",
                (true, Some(_)) => "cross",
                (false, None) => "far",
                _ => "other",
            };
            seen.entry(role).or_default().push(t.x[i][j]);
        }
    }
    let total = qu(t.classes);
    let mut value = |role: &str| -> Q {
        let v = seen.remove(role).unwrap_or_default();
        if v.windows(2).any(|w| w[0] != w[1]) {
            nonuniform.push(format!("round {round} {role}"));
        }
        v.first().map_or(Q::zero(), |&k| qu(k) / &total)
    };
    RoundFractions {
        round: round.into(),
        y_simplex: value("y_simplex"),
        y_far: value("y_far"),
        own: value("own"),
        cross: value("cross"),
        far: value("far"),
        other: value("other"),
    }
}

/// The combined solution in orbit form: one value per role.
#[derive(Clone, Debug, Serialize)]
pub struct LbflProjection {
    pub n: usize,
    pub c: usize,
    pub bound: usize,
    pub measures: RoundMeasures,
    pub round_a: RoundFractions,
    pub round_b: RoundFractions,
    #[serde(with = "serde_exact")]
    pub y_simplex: Q,
    #[serde(with = "serde_exact")]
    pub y_far: Q,
    #[serde(with = "serde_exact")]
    pub own: Q,
    #[serde(with = "serde_exact")]
    pub cross: Q,
    #[serde(with = "serde_exact")]
    pub far: Q,
    /// Round B leaves the far facilities at their Round A values.
    pub far_unchanged_by_b: bool,
}

impl LbflProjection {
    pub fn sets(&self) -> ExclusiveSets {
        ExclusiveSets::new(self.n)
    }

    pub fn to_dense(&self) -> YxSolution {
        let sets = self.sets();
        let n = self.n;
        let mut s = YxSolution::zeros(n + 1, sets.n_clients());
        for i in 0..=n {
            let simplex = i < n - 1;
            s.y[i] = if simplex { self.y_simplex.clone() } else { self.y_far.clone() };
            for j in 0..sets.n_clients() {
                s.x[i][j] = match (simplex, sets.owner(j)) {
                    (true, Some(o)) if o == i => self.own.clone(),
                    (true, Some(_)) => self.cross.clone(),
                    (false, None) => self.far.clone(),
                    _ => Q::zero(),
                };
            }
        }
        s
    }
}

fn expect(what: &str, got: &Q, want: &Q) -> Result<()> {
    if got != want {
        return Err(Error::Construction(format!("{what}: got {}, expected {}", fmt_q(got), fmt_q(want))));
    }
    Ok(())
}

fn usize_param(inst: &LabeledInstance, name: &str) -> Result<usize> {
    let v = inst.param(name)?;
    if !v.is_integer() || v < &Q::zero() {
        return Err(Error::InvalidParameter(format!("parameter {name} = {} is not a count", fmt_q(v))));
    }
    v.to_integer()
        .try_into()
        .map_err(|_| Error::InvalidParameter(format!("parameter {name} out of range")))
}

/// Combines Round A scaled by `phi` with Round B scaled by `xi` and checks
/// the target pattern, per-client coverage, `sum_j x_ij = B y_i` and the
/// standard LP.
pub fn lbfl_bad_projection(inst: &LabeledInstance) -> Result<LbflProjection> {
    let n = usize_param(inst, "n")?;
    let c = usize_param(inst, "c")?;
    if inst.base.mode != Mode::Lbfl || inst.base.n_facilities != n + 1 || inst.base.n_clients != n * n * n {
        return Err(Error::WrongShape("not a lower-bounded gap instance".into()));
    }
    let measures = RoundMeasures::lbfl(n, c)?;
    let (ra, rb) = lbfl_round_fractions(n, c)?;
    let mix = |a: &Q, b: &Q| a * &measures.phi + b * &measures.xi;
    let nq = qu(n as u64);
    let n2 = &nq * &nq;
    let one = Q::one();
    let proj = LbflProjection {
        n,
        c,
        bound: n * n,
        y_simplex: mix(&ra.y_simplex, &rb.y_simplex),
        y_far: mix(&ra.y_far, &rb.y_far),
        own: mix(&ra.own, &rb.own),
        cross: mix(&ra.cross, &rb.cross),
        far: mix(&ra.far, &rb.far),
        far_unchanged_by_b: rb.y_far.is_zero() && rb.far.is_zero(),
        measures,
        round_a: ra,
        round_b: rb,
    };
    expect("y of a simplex facility", &proj.y_simplex, &((&n2 - &one) / &n2))?;
    expect("y of a far facility", &proj.y_far, &((&n2 + &nq - &one) / (qu(2) * &n2)))?;
    expect("own-exclusive assignment", &proj.own, &((&n2 - &one) / &n2))?;
    expect("cross assignment", &proj.cross, &(one.clone() / (&n2 * (&nq - qu(2)))))?;
    expect("far assignment", &proj.far, &Q::new(1.into(), 2.into()))?;

    let dense = proj.to_dense();
    let b = qu(proj.bound as u64);
    for (i, row) in dense.x.iter().enumerate() {
        let load: Q = row.iter().sum();
        expect(&format!("sum_j x[{i},j]"), &load, &(&b * &dense.y[i]))?;
    }
    for j in 0..inst.base.n_clients {
        let cover: Q = dense.x.iter().map(|row| &row[j]).sum();
        expect(&format!("coverage of client {j}"), &cover, &one)?;
    }
    let report = check_feasible(&dense.to_point(), &standard_lp(&inst.base))?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Construction(format!("standard LP violated: {v:?}")));
    }
    Ok(proj)
}

/// Cost of the bad solution against the two-case integral lower bound.
#[derive(Clone, Debug, Serialize)]
pub struct LbflGapReport {
    pub n: usize,
    #[serde(with = "serde_exact")]
    pub fractional_cost: Q,
    /// Some simplex facility stays closed: its `B - 1` exclusive clients
    /// travel at least `D`.
    #[serde(with = "serde_exact")]
    pub closed_simplex_bound: Q,
    /// Every simplex facility opens: each needs one client from outside its
    /// point, and the shortfall reaches the far point, `n - 1` trips of `D'`.
    #[serde(with = "serde_exact")]
    pub far_travel_bound: Q,
    #[serde(with = "serde_exact")]
    pub integral_lower_bound: Q,
    #[serde(with = "serde_exact")]
    pub gap: Q,
    pub report: GapReport,
}

pub fn lbfl_gap_report(inst: &LabeledInstance, proj: &LbflProjection) -> Result<LbflGapReport> {
    let n = proj.n;
    let d = inst.param("D")?.clone();
    let dp = inst.param("Dp")?.clone();
    let cost = proj.to_dense().cost(&inst.base);
    let closed = qu(proj.bound as u64 - 1) * &d;
    let far = qu(n as u64 - 1) * &dp;
    let bound = closed.clone().min(far.clone());
    let gap = &bound / &cost;
    let mut report = GapReport::new("proper-lbfl", &cost, Some(&bound));
    report.integral_skipped = Some("integral value is the two-case lower bound".into());
    Ok(LbflGapReport {
        n,
        fractional_cost: cost,
        closed_simplex_bound: closed,
        far_travel_bound: far,
        integral_lower_bound: bound,
        gap,
        report,
    })
}

/// Brute-force integral optimum of the gap geometry at small `n` next to the
/// two-case bound.
pub fn lbfl_bound_brute_force(n: usize, d: &Q, subset_budget: u128) -> Result<(Q, Q)> {
    let inst = lbfl_gap_geometry(n, d)?;
    let opt = integral_optimum(&inst.base, subset_budget)?.cost;
    let b = (n * n) as u64;
    let bound = (qu(b - 1) * d).min(qu(n as u64 - 1) * inst.param("Dp")?);
    Ok((opt, bound))
}
