//! Exact-rational linear programs and their line-oriented text format.
//!
//! ```text
//! minimize: 1*y0 + 1/2*x0_0
//! subject to:
//! 1*x0_0 + -1*y0 <= 0
//! 1*x0_0 = 1
//! bounds:
//! 0 <= y0 <= 1
//! 0 <= x0_0
//! ```
//!
//! Every variable is declared in the bounds section; `free v` declares an
//! unbounded variable.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, qi, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    pub fn holds(self, lhs: &Q, rhs: &Q) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lo: Option<Q>,
    pub hi: Option<Q>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Q)>,
    pub rel: Relation,
    pub rhs: Q,
    pub label: String,
}

impl Constraint {
    pub fn lhs(&self, point: &[Q]) -> Q {
        self.coeffs
            .iter()
            .fold(Q::zero(), |acc, (v, c)| acc + c * &point[*v])
    }
}

/// A minimization LP: variables with optional bounds, linear constraints and a
/// linear objective.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LinearProgram {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<(usize, Q)>,
    index: HashMap<String, usize>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable with bounds `[0, +inf)`.
    pub fn add_var(&mut self, name: impl Into<String>) -> usize {
        self.add_var_bounded(name, Some(qi(0)), None)
    }

    pub fn add_var_bounded(&mut self, name: impl Into<String>, lo: Option<Q>, hi: Option<Q>) -> usize {
        let name = name.into();
        let id = self.variables.len();
        self.index.insert(name.clone(), id);
        self.variables.push(Variable { name, lo, hi });
        id
    }

    pub fn var(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Q)>, rel: Relation, rhs: Q) -> usize {
        let label = format!("c{}", self.constraints.len());
        self.add_labeled(label, coeffs, rel, rhs)
    }

    pub fn add_labeled(
        &mut self,
        label: impl Into<String>,
        coeffs: Vec<(usize, Q)>,
        rel: Relation,
        rhs: Q,
    ) -> usize {
        let coeffs = merge_terms(coeffs);
        self.constraints.push(Constraint {
            coeffs,
            rel,
            rhs,
            label: label.into(),
        });
        self.constraints.len() - 1
    }

    pub fn set_objective(&mut self, coeffs: Vec<(usize, Q)>) {
        self.objective = merge_terms(coeffs);
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn objective_at(&self, point: &[Q]) -> Q {
        self.objective
            .iter()
            .fold(Q::zero(), |acc, (v, c)| acc + c * &point[*v])
    }

    /// Structural checks: referenced variables exist and bounds are ordered.
    pub fn validate(&self) -> Result<()> {
        let n = self.variables.len();
        for v in &self.variables {
            if let (Some(lo), Some(hi)) = (&v.lo, &v.hi) {
                if lo > hi {
                    return Err(Error::MalformedLp(format!("variable {} has lo > hi", v.name)));
                }
            }
        }
        for c in &self.constraints {
            if let Some((v, _)) = c.coeffs.iter().find(|(v, _)| *v >= n) {
                return Err(Error::MalformedLp(format!("constraint {} references variable #{v}", c.label)));
            }
        }
        if let Some((v, _)) = self.objective.iter().find(|(v, _)| *v >= n) {
            return Err(Error::MalformedLp(format!("objective references variable #{v}")));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let terms = |coeffs: &[(usize, Q)]| -> String {
            if coeffs.is_empty() {
                return "0".into();
            }
            coeffs
                .iter()
                .map(|(v, c)| format!("{}*{}", fmt_q(c), self.variables[*v].name))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        let _ = writeln!(out, "minimize: {}", terms(&self.objective));
        let _ = writeln!(out, "subject to:");
        for c in &self.constraints {
            let _ = writeln!(out, "{} {} {}", terms(&c.coeffs), c.rel.symbol(), fmt_q(&c.rhs));
        }
        let _ = writeln!(out, "bounds:");
        for v in &self.variables {
            let line = match (&v.lo, &v.hi) {
                (None, None) => format!("free {}", v.name),
                (Some(lo), None) => format!("{} <= {}", fmt_q(lo), v.name),
                (None, Some(hi)) => format!("{} <= {}", v.name, fmt_q(hi)),
                (Some(lo), Some(hi)) => format!("{} <= {} <= {}", fmt_q(lo), v.name, fmt_q(hi)),
            };
            let _ = writeln!(out, "{line}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            Head,
            Rows,
            Bounds,
        }
        let mut objective_line = None;
        let mut rows = Vec::new();
        let mut bounds = Vec::new();
        let mut section = Section::Head;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("minimize:") {
                objective_line = Some(rest.trim().to_string());
                continue;
            }
            match line {
                "subject to:" => section = Section::Rows,
                "bounds:" => section = Section::Bounds,
                _ => match section {
                    Section::Rows => rows.push(line.to_string()),
                    Section::Bounds => bounds.push(line.to_string()),
                    Section::Head => return Err(Error::Parse(format!("unexpected line `{line}`"))),
                },
            }
        }
        let mut lp = LinearProgram::new();
        for b in &bounds {
            parse_bound(&mut lp, b)?;
        }
        let objective = match objective_line {
            Some(o) => parse_terms(&lp, &o)?,
            None => return Err(Error::Parse("missing `minimize:` line".into())),
        };
        lp.set_objective(objective);
        for r in &rows {
            let (rel, pos, len) = find_relation(r)?;
            let coeffs = parse_terms(&lp, &r[..pos])?;
            let rhs = parse_q(&r[pos + len..])?;
            lp.add_constraint(coeffs, rel, rhs);
        }
        Ok(lp)
    }
}

fn merge_terms(coeffs: Vec<(usize, Q)>) -> Vec<(usize, Q)> {
    let mut merged: Vec<(usize, Q)> = Vec::with_capacity(coeffs.len());
    let mut sorted = coeffs;
    sorted.sort_by_key(|(v, _)| *v);
    for (v, c) in sorted {
        match merged.last_mut() {
            Some((lv, lc)) if *lv == v => *lc += c,
            _ => merged.push((v, c)),
        }
    }
    merged.retain(|(_, c)| !c.is_zero());
    merged
}

fn find_relation(s: &str) -> Result<(Relation, usize, usize)> {
    if let Some(p) = s.find("<=") {
        return Ok((Relation::Le, p, 2));
    }
    if let Some(p) = s.find(">=") {
        return Ok((Relation::Ge, p, 2));
    }
    if let Some(p) = s.find('=') {
        return Ok((Relation::Eq, p, 1));
    }
    Err(Error::Parse(format!("no relation in `{s}`")))
}

fn parse_terms(lp: &LinearProgram, s: &str) -> Result<Vec<(usize, Q)>> {
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for term in s.split(" + ") {
        let term = term.trim();
        let (coef, name) = term
            .split_once('*')
            .ok_or_else(|| Error::Parse(format!("term `{term}` is not coef*var")))?;
        let v = lp
            .var(name.trim())
            .ok_or_else(|| Error::MissingVariable(name.trim().to_string()))?;
        out.push((v, parse_q(coef)?));
    }
    Ok(out)
}

fn parse_bound(lp: &mut LinearProgram, line: &str) -> Result<()> {
    if let Some(name) = line.strip_prefix("free ") {
        lp.add_var_bounded(name.trim(), None, None);
        return Ok(());
    }
    let parts: Vec<&str> = line.split("<=").map(str::trim).collect();
    let is_name = |p: &str| parse_q(p).is_err();
    match parts.as_slice() {
        [lo, name, hi] => {
            lp.add_var_bounded(*name, Some(parse_q(lo)?), Some(parse_q(hi)?));
        }
        [a, b] if is_name(a) => {
            lp.add_var_bounded(*a, None, Some(parse_q(b)?));
        }
        [a, b] => {
            lp.add_var_bounded(*b, Some(parse_q(a)?), None);
        }
        _ => return Err(Error::Parse(format!("bad bound line `{line}`"))),
    }
    Ok(())
}

/// Result of an exact feasibility check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub indices: Vec<usize>,
    #[serde(with = "crate::rational::serde_q")]
    pub lhs: Q,
    #[serde(with = "crate::rational::serde_q")]
    pub rhs: Q,
}

/// Checks `point` against every bound and constraint of `lp`.
pub fn violations(lp: &LinearProgram, point: &[Q]) -> Result<Vec<Violation>> {
    if point.len() != lp.num_vars() {
        let missing = lp
            .variables
            .get(point.len())
            .map(|v| v.name.clone())
            .unwrap_or_else(|| "<extra coordinate>".into());
        return Err(Error::MissingVariable(missing));
    }
    let mut out = Vec::new();
    for (i, v) in lp.variables.iter().enumerate() {
        if let Some(lo) = &v.lo {
            if &point[i] < lo {
                out.push(Violation {
                    condition: format!("lower bound of {}", v.name),
                    indices: vec![i],
                    lhs: point[i].clone(),
                    rhs: lo.clone(),
                });
            }
        }
        if let Some(hi) = &v.hi {
            if &point[i] > hi {
                out.push(Violation {
                    condition: format!("upper bound of {}", v.name),
                    indices: vec![i],
                    lhs: point[i].clone(),
                    rhs: hi.clone(),
                });
            }
        }
    }
    for (k, c) in lp.constraints.iter().enumerate() {
        let lhs = c.lhs(point);
        if !c.rel.holds(&lhs, &c.rhs) {
            out.push(Violation {
                condition: format!("{} ({} {})", c.label, c.rel.symbol(), fmt_q(&c.rhs)),
                indices: vec![k],
                lhs,
                rhs: c.rhs.clone(),
            });
        }
    }
    Ok(out)
}

/// Slack of a violation: how far the left side misses the right side.
pub fn slack(v: &Violation) -> Q {
    (&v.lhs - &v.rhs).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn sample() -> LinearProgram {
        let mut lp = LinearProgram::new();
        let y = lp.add_var_bounded("y", Some(qi(0)), Some(qi(1)));
        let x = lp.add_var("x");
        let z = lp.add_var_bounded("z", None, None);
        lp.add_constraint(vec![(x, qi(1)), (y, qi(-1))], Relation::Le, qi(0));
        lp.add_constraint(vec![(x, qi(1)), (z, q(1, 2))], Relation::Eq, qi(1));
        lp.add_constraint(vec![(y, q(3, 4))], Relation::Ge, q(1, 8));
        lp.set_objective(vec![(y, qi(2)), (x, q(-1, 3))]);
        lp
    }

    #[test]
    fn text_round_trip() {
        let lp = sample();
        let back = LinearProgram::from_text(&lp.to_text()).unwrap();
        assert_eq!(back.to_text(), lp.to_text());
        assert_eq!(back.constraints, lp.constraints);
        assert_eq!(back.variables, lp.variables);
    }

    #[test]
    fn rejects_unknown_variable() {
        let text = "minimize: 1*a\nsubject to:\nbounds:\n0 <= b\n";
        assert!(matches!(LinearProgram::from_text(text), Err(Error::MissingVariable(_))));
    }

    #[test]
    fn violations_report_every_failure() {
        let lp = sample();
        let bad = vec![qi(0), qi(2), qi(0)];
        let v = violations(&lp, &bad).unwrap();
        assert_eq!(v.len(), 3);
        assert!(violations(&lp, &[qi(0)]).is_err());
    }

    proptest! {
        #[test]
        fn random_programs_round_trip(
            rows in prop::collection::vec(
                (prop::collection::vec((0usize..4, -9i64..10, 1i64..5), 1..4), 0u8..3, -9i64..10),
                0..6),
            obj in prop::collection::vec((0usize..4, -9i64..10, 1i64..5), 0..4),
        ) {
            let mut lp = LinearProgram::new();
            for i in 0..4 {
                lp.add_var_bounded(format!("v{i}"), Some(qi(0)), if i % 2 == 0 { Some(qi(3)) } else { None });
            }
            for (terms, rel, rhs) in rows {
                let rel = [Relation::Le, Relation::Eq, Relation::Ge][rel as usize];
                lp.add_constraint(terms.into_iter().map(|(v, p, d)| (v, q(p, d))).collect(), rel, qi(rhs));
            }
            lp.set_objective(obj.into_iter().map(|(v, p, d)| (v, q(p, d))).collect());
            let back = LinearProgram::from_text(&lp.to_text()).unwrap();
            prop_assert_eq!(back.to_text(), lp.to_text());
        }
    }
}
