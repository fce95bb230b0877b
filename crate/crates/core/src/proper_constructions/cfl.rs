//! Capacitated construction: density-`U` classes spread so that the costly
//! facility opens to `1/n²` while every client stays covered.

use num_traits::{One, Zero};
use serde::Serialize;

use super::{class_density, RoundMeasures};
use crate::error::{Error, Result};
use crate::instances::{LabeledInstance, Mode};
use crate::rational::{fmt_q, qu, serde_exact, serde_exact_vec, Q};
use crate::relaxations::{cyclic_classes, project_constellation, standard_lp, ClassSet, YxSolution};
use crate::solver::{best_assignment, check_feasible, integral_optimum, GapReport, IntegralSolution, DEFAULT_SUBSET_BUDGET};

impl RoundMeasures {
    /// Capacitated rounds for a support of `t` facilities per class:
    /// `phi = 1/(n t)` and `xi = (n-1)(1 - 1/n²)/t`. The `c` field holds `t`.
    pub fn cfl(n: usize, t: usize) -> Result<Self> {
        if n < 3 || t == 0 || t > n - 1 {
            return Err(Error::InvalidParameter(format!("need 1 <= t <= n-1 (n={n}, t={t})")));
        }
        let (nq, tq) = (qu(n as u64), qu(t as u64));
        let one = Q::one();
        let phi = &one / (&nq * &tq);
        let xi = (&nq - &one) * (&one - &one / (&nq * &nq)) / &tq;
        Ok(RoundMeasures { n, c: t, phi, xi })
    }
}

pub fn cfl_round_measures(n: usize, t: usize) -> Result<RoundMeasures> {
    RoundMeasures::cfl(n, t)
}

/// Bad solution of the capacitated family in orbit form. Facility `n-1` is
/// the costly one.
#[derive(Clone, Debug, Serialize)]
pub struct CflProjection {
    pub n: usize,
    pub t: usize,
    pub capacity: u64,
    pub clients: usize,
    pub measures: RoundMeasures,
    #[serde(with = "serde_exact")]
    pub y_regular: Q,
    #[serde(with = "serde_exact")]
    pub y_special: Q,
    #[serde(with = "serde_exact")]
    pub x_regular: Q,
    #[serde(with = "serde_exact")]
    pub x_special: Q,
    #[serde(with = "serde_exact")]
    pub cost: Q,
}

impl CflProjection {
    pub fn special(&self) -> usize {
        self.n - 1
    }

    pub fn to_dense(&self) -> YxSolution {
        let mut s = YxSolution::zeros(self.n, self.clients);
        for i in 0..self.n {
            let special = i == self.special();
            s.y[i] = if special { self.y_special.clone() } else { self.y_regular.clone() };
            let x = if special { &self.x_special } else { &self.x_regular };
            s.x[i] = vec![x.clone(); self.clients];
        }
        s
    }
}

fn cfl_shape(inst: &LabeledInstance) -> Result<(usize, u64, usize)> {
    let b = &inst.base;
    let n = b.n_facilities;
    let u = b.capacity_or_bound;
    if b.mode != Mode::Cfl || n < 3 || u != (n * n) as u64 || b.n_clients as u64 != (n as u64 - 1) * u + 1 {
        return Err(Error::WrongShape("not a capacitated proper-gap instance".into()));
    }
    Ok((n, u, b.n_clients))
}

/// Round A spends `phi` on classes over `t` facilities drawn from all `n`;
/// Round B spends `xi` on classes over `t` regular facilities. Each class
/// assigns `U` clients per facility, spread uniformly over the clients.
pub fn cfl_bad_projection(inst: &LabeledInstance, t: Option<usize>) -> Result<CflProjection> {
    let (n, u, m) = cfl_shape(inst)?;
    let t = t.unwrap_or(n - 1);
    let measures = RoundMeasures::cfl(n, t)?;
    let (nq, tq, uq, mq) = (qu(n as u64), qu(t as u64), qu(u), qu(m as u64));
    let n1 = &nq - Q::one();
    let (ya, xa) = (&tq / &nq, &tq * &uq / (&mq * &nq));
    let (yb, xb) = (&tq / &n1, &tq * &uq / (&mq * &n1));
    let y_special = &ya * &measures.phi;
    let x_special = &xa * &measures.phi;
    let y_regular = &y_special + &yb * &measures.xi;
    let x_regular = &x_special + &xb * &measures.xi;
    let proj = CflProjection {
        n,
        t,
        capacity: u,
        clients: m,
        cost: &inst.base.opening_cost[n - 1] * &y_special,
        measures,
        y_regular,
        y_special,
        x_regular,
        x_special,
    };
    let expect = |what: &str, got: &Q, want: Q| -> Result<()> {
        if *got != want {
            return Err(Error::Construction(format!("{what}: got {}, expected {}", fmt_q(got), fmt_q(&want))));
        }
        Ok(())
    };
    let n2 = &nq * &nq;
    expect("y of a regular facility", &proj.y_regular, Q::one())?;
    expect("y of the costly facility", &proj.y_special, Q::one() / &n2)?;
    expect("x to the costly facility", &proj.x_special, &uq / &n2 / &mq)?;
    expect("x to a regular facility", &proj.x_regular, (Q::one() - &proj.x_special) / &n1)?;
    let report = check_feasible(&proj.to_dense().to_point(), &standard_lp(&inst.base))?;
    if let Some(v) = report.violations.first() {
        return Err(Error::Construction(format!("standard LP violated: {v:?}")));
    }
    Ok(proj)
}

#[derive(Clone, Debug, Serialize)]
pub struct CflGapReport {
    pub n: usize,
    #[serde(with = "serde_exact")]
    pub fractional_cost: Q,
    #[serde(with = "serde_exact")]
    pub integral_optimum: Q,
    /// `subset-brute-force` for n <= 5, otherwise `coverage-count`.
    pub integral_method: String,
    #[serde(with = "serde_exact")]
    pub gap: Q,
    pub report: GapReport,
}

fn subset_brute_force(inst: &LabeledInstance) -> Result<Q> {
    let n = inst.base.n_facilities;
    (1u64..1 << n)
        .filter_map(|mask| {
            let open: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            best_assignment(&inst.base, &open).map(|s| s.cost)
        })
        .min()
        .ok_or_else(|| Error::InfeasibleInput("no facility subset is feasible".into()))
}

pub fn cfl_gap_report(inst: &LabeledInstance, proj: &CflProjection) -> Result<CflGapReport> {
    let cost = proj.to_dense().cost(&inst.base);
    let (opt, method) = if proj.n <= 5 {
        (subset_brute_force(inst)?, "subset-brute-force")
    } else {
        (integral_optimum(&inst.base, DEFAULT_SUBSET_BUDGET)?.cost, "coverage-count")
    };
    if cost.is_zero() {
        return Err(Error::Construction("fractional cost is zero".into()));
    }
    Ok(CflGapReport {
        n: proj.n,
        gap: &opt / &cost,
        report: GapReport::new("proper-cfl", &cost, Some(&opt)),
        fractional_cost: cost,
        integral_optimum: opt,
        integral_method: method.into(),
    })
}

/// Cyclic windows of `n-1` facilities over the integral solution that fills
/// every regular facility and sends one client to the costly facility.
#[derive(Clone, Debug, Serialize)]
pub struct CflSupport {
    pub classes: ClassSet,
    #[serde(with = "serde_exact_vec")]
    pub weights: Vec<Q>,
    #[serde(with = "serde_exact_vec")]
    pub densities: Vec<Q>,
    /// The weighted windows project exactly onto the integral solution.
    pub projects_to_integral: bool,
}

pub fn cfl_canonical_support(inst: &LabeledInstance) -> Result<CflSupport> {
    let (n, u, m) = cfl_shape(inst)?;
    let assignment: Vec<usize> = (0..m).map(|j| (j / u as usize).min(n - 1)).collect();
    let sol = IntegralSolution::evaluate(&inst.base, (0..n).collect(), assignment);
    if !sol.is_feasible(&inst.base) {
        return Err(Error::Construction("canonical integral solution is infeasible".into()));
    }
    let classes = ClassSet::new(cyclic_classes(&sol, n - 1)?);
    let weights = vec![Q::one() / qu(n as u64 - 1); classes.len()];
    let densities = classes
        .classes
        .iter()
        .map(|cl| class_density(cl, Some(n - 1)))
        .collect::<Result<Vec<_>>>()?;
    let proj = project_constellation(&inst.base, &classes, &weights)?;
    let projects = proj == YxSolution::from_integral(&inst.base, &sol);
    Ok(CflSupport {
        classes,
        weights,
        densities,
        projects_to_integral: projects,
    })
}
