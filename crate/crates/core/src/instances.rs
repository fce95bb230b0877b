//! Facility location instances and the builders for the gap families.

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use num_traits::{Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, parse_q, q, qi, qu, serde_q_map, serde_q_vec, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Mode {
    Cfl,
    Lbfl,
}

/// Connection costs stored as a default distance plus sparse overrides.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionCosts {
    pub default: Q,
    overrides: HashMap<(usize, usize), Q>,
}

impl ConnectionCosts {
    pub fn uniform(default: Q) -> Self {
        ConnectionCosts {
            default,
            overrides: HashMap::new(),
        }
    }

    pub fn get(&self, facility: usize, client: usize) -> &Q {
        self.overrides
            .get(&(facility, client))
            .unwrap_or(&self.default)
    }

    pub fn set(&mut self, facility: usize, client: usize, value: Q) {
        if value == self.default {
            self.overrides.remove(&(facility, client));
        } else {
            self.overrides.insert((facility, client), value);
        }
    }

    /// Overrides in deterministic (facility, client) order.
    pub fn entries(&self) -> Vec<(usize, usize, &Q)> {
        let mut v: Vec<_> = self.overrides.iter().map(|(&(i, j), c)| (i, j, c)).collect();
        v.sort_by_key(|&(i, j, _)| (i, j));
        v
    }

    pub fn is_all_zero(&self) -> bool {
        self.default.is_zero() && self.overrides.values().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FacilityLocationInstance {
    pub mode: Mode,
    pub n_facilities: usize,
    pub n_clients: usize,
    pub opening_cost: Vec<Q>,
    pub connection_cost: ConnectionCosts,
    /// U for CFL, B for LBFL.
    pub capacity_or_bound: u64,
    /// Set when the costs are claimed to satisfy the cross inequality.
    pub metric: bool,
}

impl FacilityLocationInstance {
    pub fn cost(&self, facility: usize, client: usize) -> &Q {
        self.connection_cost.get(facility, client)
    }

    /// Whether some integral solution exists (uniform bounds make this a count).
    pub fn integrally_feasible(&self) -> bool {
        let n = self.n_facilities as u128;
        let m = self.n_clients as u128;
        let u = self.capacity_or_bound as u128;
        match self.mode {
            Mode::Cfl => n * u >= m,
            Mode::Lbfl => m == 0 || m >= u,
        }
    }

    /// Checks the stated instance invariants, including the cross inequality
    /// when the metric flag is set.
    pub fn validate(&self) -> Result<()> {
        if self.n_facilities == 0 || self.n_clients == 0 {
            return Err(Error::InvalidParameter(
                "instance needs at least one facility and one client".into(),
            ));
        }
        if self.capacity_or_bound == 0 {
            return Err(Error::InvalidParameter("capacity/bound must be positive".into()));
        }
        if self.opening_cost.len() != self.n_facilities {
            return Err(Error::InvalidParameter(format!(
                "{} opening costs for {} facilities",
                self.opening_cost.len(),
                self.n_facilities
            )));
        }
        if let Some(f) = self.opening_cost.iter().position(|c| c.is_negative()) {
            return Err(Error::InvalidParameter(format!("negative opening cost at facility {f}")));
        }
        if self.connection_cost.default.is_negative() {
            return Err(Error::InvalidParameter("negative default distance".into()));
        }
        for (i, j, c) in self.connection_cost.entries() {
            if i >= self.n_facilities || j >= self.n_clients {
                return Err(Error::InvalidParameter(format!("cost entry ({i},{j}) out of range")));
            }
            if c.is_negative() {
                return Err(Error::InvalidParameter(format!("negative cost at ({i},{j})")));
            }
        }
        if self.mode == Mode::Cfl && !self.integrally_feasible() {
            return Err(Error::InvalidParameter(format!(
                "CFL instance with n*U = {} < m = {}",
                self.n_facilities as u128 * self.capacity_or_bound as u128,
                self.n_clients
            )));
        }
        if self.metric {
            if let Some((i, i2, j, j2)) = self.metric_violation() {
                return Err(Error::InvalidParameter(format!(
                    "cross inequality fails for i={i}, i'={i2}, j={j}, j'={j2}"
                )));
            }
        }
        Ok(())
    }

    /// First quadruple (i, i', j, j') with c_ij > c_ij' + c_i'j' + c_i'j, if any.
    ///
    /// Clients with identical cost columns are merged first; this is exact
    /// since the inequality only depends on the columns.
    pub fn metric_violation(&self) -> Option<(usize, usize, usize, usize)> {
        let mut columns: BTreeMap<Vec<String>, usize> = BTreeMap::new();
        for j in 0..self.n_clients {
            let key: Vec<String> = (0..self.n_facilities).map(|i| fmt_q(self.cost(i, j))).collect();
            columns.entry(key).or_insert(j);
        }
        let reps: Vec<usize> = columns.values().copied().collect();
        let col = |j: usize| -> Vec<Q> { (0..self.n_facilities).map(|i| self.cost(i, j).clone()).collect() };
        let cols: Vec<Vec<Q>> = reps.iter().map(|&j| col(j)).collect();
        for (a, cj) in cols.iter().enumerate() {
            for (b, cj2) in cols.iter().enumerate() {
                for i in 0..self.n_facilities {
                    for i2 in 0..self.n_facilities {
                        if cj[i] > &cj2[i] + &cj2[i2] + &cj[i2] {
                            return Some((i, i2, reps[a], reps[b]));
                        }
                    }
                }
            }
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FacilityLabel {
    Cheap,
    Costly,
    Simplex,
    FarCluster,
    Plain,
}

/// An instance together with facility roles and the symbols it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledInstance {
    pub base: FacilityLocationInstance,
    pub facility_labels: Vec<FacilityLabel>,
    pub params: BTreeMap<String, Q>,
}

impl LabeledInstance {
    pub fn plain(base: FacilityLocationInstance) -> Self {
        let labels = vec![FacilityLabel::Plain; base.n_facilities];
        LabeledInstance {
            base,
            facility_labels: labels,
            params: BTreeMap::new(),
        }
    }

    pub fn param(&self, name: &str) -> Result<&Q> {
        self.params
            .get(name)
            .ok_or_else(|| Error::WrongShape(format!("instance has no parameter `{name}`")))
    }

    pub fn facilities_with(&self, label: FacilityLabel) -> Vec<usize> {
        self.facility_labels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == label)
            .map(|(i, _)| i)
            .collect()
    }

    /// Re-derives the dependent symbols from the defining ones and compares
    /// them with the stored values.
    pub fn check_params(&self) -> Result<()> {
        if self.facility_labels.len() != self.base.n_facilities {
            return Err(Error::WrongShape("label list does not cover every facility".into()));
        }
        let mismatch = |name: &str, want: &Q| -> Result<()> {
            match self.params.get(name) {
                Some(v) if v == want => Ok(()),
                Some(v) => Err(Error::WrongShape(format!(
                    "param {name} = {} but re-derived {}",
                    fmt_q(v),
                    fmt_q(want)
                ))),
                None => Err(Error::WrongShape(format!("missing param {name}"))),
            }
        };
        let has = |l| self.facility_labels.contains(&l);
        if has(FacilityLabel::Cheap) || has(FacilityLabel::Costly) {
            let n = self.param("n")?.clone();
            let h = self.param("H")?.clone();
            let n2 = &n * &n;
            mismatch("a", &(Q::from_integer(1.into()) / &n2))?;
            mismatch("b", &(&h / &n2))?;
            mismatch("U", &(&n2 * &n))?;
        }
        if has(FacilityLabel::Simplex) {
            let n = self.param("n")?.clone();
            mismatch("B", &(&n * &n))?;
            let d = self.param("D")?.clone();
            mismatch("Dp", &(qi(2) * &n * d))?;
        }
        if let Some(u) = self.params.get("U") {
            if self.base.mode == Mode::Cfl && *u != qu(self.base.capacity_or_bound) {
                return Err(Error::WrongShape("param U disagrees with capacity".into()));
            }
        }
        if let Some(b) = self.params.get("B") {
            if self.base.mode == Mode::Lbfl && *b != qu(self.base.capacity_or_bound) {
                return Err(Error::WrongShape("param B disagrees with bound".into()));
            }
        }
        Ok(())
    }
}

fn positive(name: &str, v: usize, min: usize) -> Result<()> {
    if v < min {
        return Err(Error::InvalidParameter(format!("{name} = {v} must be at least {min}")));
    }
    Ok(())
}

/// CFL instance with `n` free Cheap facilities, `l` unit-cost Costly
/// facilities, capacity n³ and n⁴ + 1 co-located clients.
pub fn build_ls_instance(n: usize, l: usize, h: &Q) -> Result<LabeledInstance> {
    positive("n", n, 2)?;
    positive("l", l, 1)?;
    if !h.is_positive() {
        return Err(Error::InvalidParameter(format!("H = {} must be positive", fmt_q(h))));
    }
    let u = (n as u64).checked_pow(3).ok_or_else(|| Error::InvalidParameter("n too large".into()))?;
    let m = n as u64 * u + 1;
    let mut opening = vec![qi(0); n];
    opening.extend(std::iter::repeat_n(qi(1), l));
    let base = FacilityLocationInstance {
        mode: Mode::Cfl,
        n_facilities: n + l,
        n_clients: m as usize,
        opening_cost: opening,
        connection_cost: ConnectionCosts::uniform(qi(0)),
        capacity_or_bound: u,
        metric: true,
    };
    let mut labels = vec![FacilityLabel::Cheap; n];
    labels.extend(std::iter::repeat_n(FacilityLabel::Costly, l));
    let nq = qu(n as u64);
    let n2 = &nq * &nq;
    let mut params = BTreeMap::new();
    params.insert("n".into(), nq.clone());
    params.insert("l".into(), qu(l as u64));
    params.insert("H".into(), h.clone());
    params.insert("a".into(), Q::from_integer(1.into()) / &n2);
    params.insert("b".into(), h / &n2);
    params.insert("U".into(), qu(u));
    Ok(LabeledInstance {
        base,
        facility_labels: labels,
        params,
    })
}

/// Client layout of the lower-bounded gap geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LbflLayout {
    pub n: usize,
    pub bound: usize,
}

impl LbflLayout {
    pub fn new(n: usize) -> Self {
        LbflLayout { n, bound: n * n }
    }

    /// Facilities placed on simplex vertices: 0..n-1.
    pub fn simplex_facilities(&self) -> Range<usize> {
        0..self.n - 1
    }

    /// The two far facilities: n-1 and n.
    pub fn far_facilities(&self) -> [usize; 2] {
        [self.n - 1, self.n]
    }

    /// B - 1 exclusive clients co-located with simplex facility `i`.
    pub fn exclusive(&self, i: usize) -> Range<usize> {
        let w = self.bound - 1;
        i * w..(i + 1) * w
    }

    /// The n² + n - 1 clients shared by the two far facilities.
    pub fn far_clients(&self) -> Range<usize> {
        (self.n - 1) * (self.bound - 1)..self.n_clients()
    }

    pub fn n_clients(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Client of the far block that the integral solution assigns to simplex
    /// facility `i` and the construction discards.
    pub fn discarded(&self, i: usize) -> usize {
        self.far_clients().start + i
    }

    /// Point index of a client: its simplex vertex, or `n - 1` for the far point.
    pub fn client_point(&self, j: usize) -> usize {
        if j < self.far_clients().start {
            j / (self.bound - 1)
        } else {
            self.n - 1
        }
    }

    pub fn facility_point(&self, i: usize) -> usize {
        i.min(self.n - 1)
    }
}

/// Geometry of the lower-bounded gap family without the class-count parameter.
pub fn lbfl_gap_geometry(n: usize, d: &Q) -> Result<LabeledInstance> {
    positive("n", n, 3)?;
    if !d.is_positive() {
        return Err(Error::InvalidParameter("D must be positive".into()));
    }
    let layout = LbflLayout::new(n);
    let dp = qi(2) * qu(n as u64) * d;
    let mut costs = ConnectionCosts::uniform(d.clone());
    for i in 0..=n {
        let pi = layout.facility_point(i);
        for j in 0..layout.n_clients() {
            let pj = layout.client_point(j);
            let far_i = pi == n - 1;
            let far_j = pj == n - 1;
            let c = if pi == pj {
                qi(0)
            } else if far_i || far_j {
                dp.clone()
            } else {
                d.clone()
            };
            costs.set(i, j, c);
        }
    }
    let base = FacilityLocationInstance {
        mode: Mode::Lbfl,
        n_facilities: n + 1,
        n_clients: layout.n_clients(),
        opening_cost: vec![qi(0); n + 1],
        connection_cost: costs,
        capacity_or_bound: layout.bound as u64,
        metric: true,
    };
    let mut labels = vec![FacilityLabel::Simplex; n - 1];
    labels.extend([FacilityLabel::FarCluster; 2]);
    let mut params = BTreeMap::new();
    params.insert("n".into(), qu(n as u64));
    params.insert("B".into(), qu(layout.bound as u64));
    params.insert("D".into(), d.clone());
    params.insert("Dp".into(), dp);
    Ok(LabeledInstance {
        base,
        facility_labels: labels,
        params,
    })
}

/// Lower-bounded instance on which every proper relaxation of complexity at
/// most (n - c)/n has a gap linear in n.
pub fn build_lbfl_gap_instance(n: usize, c: usize, d: &Q) -> Result<LabeledInstance> {
    if c < 2 {
        return Err(Error::InvalidParameter(format!("c = {c} must be at least 2")));
    }
    if n < c + 2 {
        return Err(Error::InvalidParameter(format!("n - c - 1 must be positive (n={n}, c={c})")));
    }
    let mut inst = lbfl_gap_geometry(n, d)?;
    inst.params.insert("c".into(), qu(c as u64));
    inst.params.insert("alpha".into(), q((n - c) as i64, n as i64));
    Ok(inst)
}

/// CFL instance where every integral solution opens all `n` facilities.
pub fn build_cfl_proper_instance(n: usize) -> Result<LabeledInstance> {
    positive("n", n, 3)?;
    let u = (n * n) as u64;
    let m = (n as u64 - 1) * u + 1;
    let mut opening = vec![qi(0); n];
    opening[n - 1] = qi(1);
    let base = FacilityLocationInstance {
        mode: Mode::Cfl,
        n_facilities: n,
        n_clients: m as usize,
        opening_cost: opening,
        connection_cost: ConnectionCosts::uniform(qi(0)),
        capacity_or_bound: u,
        metric: true,
    };
    let mut inst = LabeledInstance::plain(base);
    inst.params.insert("n".into(), qu(n as u64));
    inst.params.insert("U".into(), qu(u));
    Ok(inst)
}

/// Four facilities, B = 10, client groups of sizes 13, 13, 9, 9; zero costs.
pub fn build_example1_instance() -> LabeledInstance {
    let base = FacilityLocationInstance {
        mode: Mode::Lbfl,
        n_facilities: 4,
        n_clients: 44,
        opening_cost: vec![qi(0); 4],
        connection_cost: ConnectionCosts::uniform(qi(0)),
        capacity_or_bound: 10,
        metric: true,
    };
    let mut inst = LabeledInstance::plain(base);
    inst.params.insert("B".into(), qi(10));
    inst
}

/// Client groups S1..S4 of the four-facility example.
pub fn example1_groups() -> [Range<usize>; 4] {
    [0..13, 13..26, 26..35, 35..44]
}

/// Seeded random instance with points on a line (hence metric) and small
/// integer costs.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    n_facilities: usize,
    n_clients: usize,
    mode: Mode,
    capacity_or_bound: u64,
) -> Result<FacilityLocationInstance> {
    let fac_pos: Vec<i64> = (0..n_facilities).map(|_| rng.gen_range(0..=6)).collect();
    let cli_pos: Vec<i64> = (0..n_clients).map(|_| rng.gen_range(0..=6)).collect();
    let opening: Vec<Q> = (0..n_facilities).map(|_| qi(rng.gen_range(0..=8))).collect();
    let mut costs = ConnectionCosts::uniform(qi(0));
    for (i, fp) in fac_pos.iter().enumerate() {
        for (j, cp) in cli_pos.iter().enumerate() {
            costs.set(i, j, qi((fp - cp).abs()));
        }
    }
    let inst = FacilityLocationInstance {
        mode,
        n_facilities,
        n_clients,
        opening_cost: opening,
        connection_cost: costs,
        capacity_or_bound,
        metric: true,
    };
    inst.validate()?;
    Ok(inst)
}

/// On-disk representation.
#[derive(Serialize, Deserialize)]
struct InstanceJson {
    mode: Mode,
    n_facilities: usize,
    n_clients: usize,
    capacity_or_bound: u64,
    #[serde(with = "serde_q_vec")]
    opening_cost: Vec<Q>,
    connection_cost: CostJson,
    #[serde(default)]
    metric: bool,
    #[serde(default)]
    labels: Vec<FacilityLabel>,
    #[serde(default, with = "serde_q_map")]
    params: BTreeMap<String, Q>,
}

#[derive(Serialize, Deserialize)]
struct CostJson {
    default_distance: String,
    entries: Vec<(usize, usize, String)>,
}

impl LabeledInstance {
    pub fn to_json(&self) -> Result<String> {
        let b = &self.base;
        let doc = InstanceJson {
            mode: b.mode,
            n_facilities: b.n_facilities,
            n_clients: b.n_clients,
            capacity_or_bound: b.capacity_or_bound,
            opening_cost: b.opening_cost.clone(),
            connection_cost: CostJson {
                default_distance: fmt_q(&b.connection_cost.default),
                entries: b
                    .connection_cost
                    .entries()
                    .into_iter()
                    .map(|(i, j, c)| (i, j, fmt_q(c)))
                    .collect(),
            },
            metric: b.metric,
            labels: self.facility_labels.clone(),
            params: self.params.clone(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: InstanceJson = serde_json::from_str(s)?;
        let mut costs = ConnectionCosts::uniform(parse_q(&doc.connection_cost.default_distance)?);
        for (i, j, c) in &doc.connection_cost.entries {
            costs.set(*i, *j, parse_q(c)?);
        }
        let base = FacilityLocationInstance {
            mode: doc.mode,
            n_facilities: doc.n_facilities,
            n_clients: doc.n_clients,
            opening_cost: doc.opening_cost,
            connection_cost: costs,
            capacity_or_bound: doc.capacity_or_bound,
            metric: doc.metric,
        };
        base.validate()?;
        let labels = if doc.labels.is_empty() {
            vec![FacilityLabel::Plain; base.n_facilities]
        } else {
            doc.labels
        };
        let inst = LabeledInstance {
            base,
            facility_labels: labels,
            params: doc.params,
        };
        inst.check_params()?;
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ls_instance_at_twenty() {
        let inst = build_ls_instance(20, 20, &qi(10)).unwrap();
        assert_eq!(inst.base.capacity_or_bound, 8000);
        assert_eq!(inst.base.n_clients, 160_001);
        assert_eq!(inst.param("b").unwrap(), &q(1, 40));
        assert_eq!(inst.param("a").unwrap(), &q(1, 400));
        // bad solution cost l*H/n^2
        let cost = inst.param("l").unwrap() * inst.param("H").unwrap() / qi(400);
        assert_eq!(cost, q(1, 2));
        inst.base.validate().unwrap();
        inst.check_params().unwrap();
    }

    #[test]
    fn ls_instance_minimum_size() {
        let inst = build_ls_instance(2, 1, &qi(10)).unwrap();
        assert_eq!(inst.base.capacity_or_bound, 8);
        assert_eq!(inst.base.n_clients, 17);
        assert_eq!(inst.base.n_facilities, 3);
    }

    #[test]
    fn ls_instance_rejects_bad_params() {
        assert!(build_ls_instance(1, 1, &qi(10)).is_err());
        assert!(build_ls_instance(3, 0, &qi(10)).is_err());
        assert!(build_ls_instance(3, 1, &qi(0)).is_err());
        assert!(build_ls_instance(3, 1, &qi(-1)).is_err());
    }

    #[test]
    fn lbfl_gap_instance_shape() {
        let inst = build_lbfl_gap_instance(5, 2, &qi(1)).unwrap();
        assert_eq!(inst.base.n_facilities, 6);
        assert_eq!(inst.base.capacity_or_bound, 25);
        assert_eq!(inst.base.n_clients, 125);
        assert_eq!(inst.param("Dp").unwrap(), &qi(10));
        let layout = LbflLayout::new(5);
        let j = layout.exclusive(0).start;
        assert_eq!(inst.base.cost(0, j), &qi(0));
        assert_eq!(inst.base.cost(1, j), &qi(1));
        assert_eq!(inst.base.cost(4, j), &qi(10));
        assert_eq!(layout.far_clients().len(), 25 + 5 - 1);
        inst.base.validate().unwrap();
    }

    #[test]
    fn lbfl_gap_instance_is_metric_exhaustively() {
        for n in 4..=6 {
            let inst = build_lbfl_gap_instance(n, 2, &qi(1)).unwrap();
            assert_eq!(inst.base.metric_violation(), None, "n = {n}");
        }
    }

    #[test]
    fn lbfl_gap_instance_rejects_degenerate() {
        assert!(build_lbfl_gap_instance(5, 1, &qi(1)).is_err());
        assert!(build_lbfl_gap_instance(3, 2, &qi(1)).is_err());
        assert!(build_lbfl_gap_instance(4, 2, &qi(1)).is_ok());
    }

    #[test]
    fn cfl_proper_instance_shape() {
        let inst = build_cfl_proper_instance(5).unwrap();
        assert_eq!(inst.base.capacity_or_bound, 25);
        assert_eq!(inst.base.n_clients, 101);
        assert_eq!(inst.base.opening_cost, vec![qi(0), qi(0), qi(0), qi(0), qi(1)]);
        let small = build_cfl_proper_instance(3).unwrap();
        assert_eq!(small.base.capacity_or_bound, 9);
        assert_eq!(small.base.n_clients, 19);
    }

    #[test]
    fn cfl_proper_forces_all_facilities_open() {
        let inst = build_cfl_proper_instance(5).unwrap();
        let u = inst.base.capacity_or_bound;
        let m = inst.base.n_clients as u64;
        for mask in 0u32..32 {
            let open = mask.count_ones() as u64;
            assert_eq!(open * u >= m, mask == 31);
        }
    }

    #[test]
    fn example1_groups_and_bound() {
        let inst = build_example1_instance();
        let sizes: Vec<usize> = example1_groups().iter().map(|r| r.len()).collect();
        assert_eq!(sizes, vec![13, 13, 9, 9]);
        assert_eq!(inst.base.n_clients, 44);
        assert_eq!(inst.base.capacity_or_bound, 10);
        // facilities 3 and 4 cannot both open on S3 and S4 alone
        assert!(9 + 9 < 2 * inst.base.capacity_or_bound);
    }

    #[test]
    fn metric_violation_detected() {
        let mut costs = ConnectionCosts::uniform(qi(0));
        costs.set(0, 0, qi(5));
        let inst = FacilityLocationInstance {
            mode: Mode::Cfl,
            n_facilities: 2,
            n_clients: 2,
            opening_cost: vec![qi(0), qi(0)],
            connection_cost: costs,
            capacity_or_bound: 2,
            metric: true,
        };
        assert!(inst.metric_violation().is_some());
        assert!(inst.validate().is_err());
    }

    #[test]
    fn json_round_trip_preserves_instance() {
        let inst = build_lbfl_gap_instance(4, 2, &q(3, 2)).unwrap();
        let back = LabeledInstance::from_json(&inst.to_json().unwrap()).unwrap();
        assert_eq!(back, inst);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = random_instance(&mut rng, 3, 6, Mode::Cfl, 3).unwrap();
        let lab = LabeledInstance::plain(r);
        assert_eq!(LabeledInstance::from_json(&lab.to_json().unwrap()).unwrap(), lab);
    }

    #[test]
    fn random_instance_is_deterministic() {
        let a = random_instance(&mut ChaCha8Rng::seed_from_u64(7), 3, 6, Mode::Cfl, 3).unwrap();
        let b = random_instance(&mut ChaCha8Rng::seed_from_u64(7), 3, 6, Mode::Cfl, 3).unwrap();
        assert_eq!(a, b);
    }
}
