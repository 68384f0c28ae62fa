//! Separation distance `Sep(X; κ_0, ..., κ_N)`.
//!
//! The supremum runs over families of Borel sets with `μ(A_i) ≥ κ_i`; on a
//! finite space it is a maximum over labelings of the points with labels
//! `0..=N` or "unused". Two solvers are provided: an exact branch and bound
//! over labelings, and a threshold route that decides `Sep ≥ r` for each
//! candidate distance `r` and binary-searches the largest feasible one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::FiniteMMSpace;
use crate::MASS_TOL;

/// Default enumeration budget of the exact route: `(N+2)^n ≤ 4^12`.
pub const SEP_BUDGET: u64 = 16_777_216;

/// Default node budget of one threshold feasibility search.
pub const SEP_NODE_BUDGET: u64 = 50_000_000;

const UNUSED: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SepOptions {
    /// Upper bound on `(N+2)^n` for the exact route.
    pub budget: u64,
    /// Node limit of each threshold feasibility search.
    pub node_budget: u64,
}

impl Default for SepOptions {
    fn default() -> Self {
        SepOptions {
            budget: SEP_BUDGET,
            node_budget: SEP_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SepRoute {
    Exact,
    Threshold,
}

/// Labeling certifying a separation value: `labels[x]` is the set index of
/// point `x`, or `None` when the point is unused.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SepWitness {
    pub labels: Vec<Option<usize>>,
}

impl SepWitness {
    pub fn set_masses(&self, space: &FiniteMMSpace, sets: usize) -> Vec<f64> {
        let mut m = vec![0.0; sets];
        for (x, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                m[*l] += space.mass(x);
            }
        }
        m
    }

    /// Minimum distance between points carrying different labels.
    pub fn min_distance(&self, space: &FiniteMMSpace) -> f64 {
        let mut best = f64::INFINITY;
        for (x, lx) in self.labels.iter().enumerate() {
            for (y, ly) in self.labels.iter().enumerate().skip(x + 1) {
                if let (Some(a), Some(b)) = (lx, ly) {
                    if a != b {
                        best = best.min(space.dist(x, y));
                    }
                }
            }
        }
        best
    }

    /// Every set meets its mass requirement.
    pub fn is_sound(&self, space: &FiniteMMSpace, kappas: &[f64]) -> bool {
        self.labels.len() == space.len()
            && self
                .labels
                .iter()
                .all(|l| l.is_none_or(|l| l < kappas.len()))
            && self
                .set_masses(space, kappas.len())
                .iter()
                .zip(kappas)
                .all(|(m, k)| *m >= k - MASS_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SepReport {
    pub kappas: Vec<f64>,
    pub value: f64,
    /// Absent when no admissible family exists (the value is then 0).
    pub witness: Option<SepWitness>,
    pub route: SepRoute,
    pub nodes: u64,
}

fn check_kappas(kappas: &[f64]) -> Result<()> {
    if kappas.len() < 2 {
        return Err(Error::invalid(
            "separation distance needs at least two mass levels",
        ));
    }
    if let Some(k) = kappas.iter().find(|k| !(**k > 0.0) || !k.is_finite()) {
        return Err(Error::invalid(format!(
            "mass levels must be positive, got {k}"
        )));
    }
    Ok(())
}

/// Trivial answers: one point, or mass requirements that no family meets.
fn trivially_zero(space: &FiniteMMSpace, kappas: &[f64]) -> bool {
    let total: f64 = kappas.iter().sum();
    space.len() <= 1 || total > 1.0 + MASS_TOL || kappas.iter().any(|&k| k > 1.0 + MASS_TOL)
}

fn zero_report(kappas: &[f64], route: SepRoute) -> SepReport {
    SepReport {
        kappas: kappas.to_vec(),
        value: 0.0,
        witness: None,
        route,
        nodes: 0,
    }
}

/// `Sep` by the exact route when `(N+2)^n` fits the budget, otherwise by the
/// threshold route.
pub fn separation_distance(
    space: &FiniteMMSpace,
    kappas: &[f64],
    opts: &SepOptions,
) -> Result<SepReport> {
    match sep_exact(space, kappas, opts) {
        Err(Error::Capacity { .. }) => sep_threshold(space, kappas, opts),
        other => other,
    }
}

/// Exact branch and bound over labelings.
pub fn sep_exact(space: &FiniteMMSpace, kappas: &[f64], opts: &SepOptions) -> Result<SepReport> {
    check_kappas(kappas)?;
    space.require_finite("the separation distance")?;
    if trivially_zero(space, kappas) {
        return Ok(zero_report(kappas, SepRoute::Exact));
    }
    let n = space.len();
    let work = ((kappas.len() + 1) as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if work > opts.budget as u128 {
        return Err(Error::capacity(
            format!(
                "exact separation distance with {} sets on {n} points",
                kappas.len()
            ),
            opts.budget,
            "use the threshold route",
        ));
    }
    let mut search = Search::new(space, kappas);
    search.exact(0, f64::INFINITY);
    let value = search.best.max(0.0);
    let witness = search.best_labels.clone().map(|labels| SepWitness {
        labels: search.order_to_points(&labels),
    });
    Ok(SepReport {
        kappas: kappas.to_vec(),
        value: if witness.is_some() { value } else { 0.0 },
        witness,
        route: SepRoute::Exact,
        nodes: search.nodes,
    })
}

/// Whether some admissible family has all cross distances at least `r`.
pub fn sep_threshold_feasible(
    space: &FiniteMMSpace,
    kappas: &[f64],
    r: f64,
    opts: &SepOptions,
) -> Result<Option<SepWitness>> {
    check_kappas(kappas)?;
    if !(r >= 0.0) {
        return Err(Error::invalid(format!(
            "threshold must be nonnegative, got {r}"
        )));
    }
    space.require_finite("the separation distance")?;
    if trivially_zero(space, kappas) {
        return Ok(None);
    }
    let mut search = Search::new(space, kappas);
    search.node_budget = opts.node_budget;
    let found = search.threshold(0, r)?;
    Ok(found.then(|| SepWitness {
        labels: search.order_to_points(&search.labels),
    }))
}

/// `Sep` as the largest candidate distance that passes the threshold test.
pub fn sep_threshold(
    space: &FiniteMMSpace,
    kappas: &[f64],
    opts: &SepOptions,
) -> Result<SepReport> {
    check_kappas(kappas)?;
    space.require_finite("the separation distance")?;
    if trivially_zero(space, kappas) {
        return Ok(zero_report(kappas, SepRoute::Threshold));
    }
    let mut candidates = vec![0.0];
    candidates.extend(space.distinct_distances().into_iter().filter(|&d| d > 0.0));
    let Some(w0) = sep_threshold_feasible(space, kappas, 0.0, opts)? else {
        return Ok(zero_report(kappas, SepRoute::Threshold));
    };
    // invariant: candidates[lo] feasible, candidates[hi] infeasible or past end
    let (mut lo, mut hi) = (0usize, candidates.len());
    let mut witness = w0;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        match sep_threshold_feasible(space, kappas, candidates[mid], opts)? {
            Some(w) => {
                lo = mid;
                witness = w;
            }
            None => hi = mid,
        }
    }
    let value = witness.min_distance(space);
    Ok(SepReport {
        kappas: kappas.to_vec(),
        value: if value.is_finite() {
            value.max(candidates[lo])
        } else {
            candidates[lo]
        },
        witness: Some(witness),
        route: SepRoute::Threshold,
        nodes: 0,
    })
}

/// Shared state of both searches. Points are visited in order of
/// decreasing mass; `labels` is indexed by that order.
struct Search<'a> {
    space: &'a FiniteMMSpace,
    kappas: &'a [f64],
    order: Vec<usize>,
    suffix_mass: Vec<f64>,
    labels: Vec<usize>,
    deficit: Vec<f64>,
    count: Vec<usize>,
    best: f64,
    best_labels: Option<Vec<usize>>,
    upper: f64,
    nodes: u64,
    node_budget: u64,
}

impl<'a> Search<'a> {
    fn new(space: &'a FiniteMMSpace, kappas: &'a [f64]) -> Self {
        let n = space.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| space.mass(b).total_cmp(&space.mass(a)).then(a.cmp(&b)));
        let mut suffix_mass = vec![0.0; n + 1];
        for i in (0..n).rev() {
            suffix_mass[i] = suffix_mass[i + 1] + space.mass(order[i]);
        }
        Search {
            space,
            kappas,
            order,
            suffix_mass,
            labels: vec![UNUSED; n],
            deficit: kappas.iter().map(|k| k - MASS_TOL).collect(),
            count: vec![0; kappas.len()],
            best: -1.0,
            best_labels: None,
            upper: space.max_finite_distance(),
            nodes: 0,
            node_budget: u64::MAX,
        }
    }

    fn order_to_points(&self, labels: &[usize]) -> Vec<Option<usize>> {
        let mut out = vec![None; labels.len()];
        for (k, &l) in labels.iter().enumerate() {
            out[self.order[k]] = (l != UNUSED).then_some(l);
        }
        out
    }

    fn outstanding(&self) -> f64 {
        self.deficit.iter().filter(|d| **d > 0.0).sum()
    }

    /// Candidate labels for the point at depth `k`: labels still short of
    /// mass, skipping empty labels whose level repeats an earlier empty one.
    fn choices(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.kappas.len());
        for l in 0..self.kappas.len() {
            if self.deficit[l] <= 0.0 {
                continue;
            }
            if self.count[l] == 0
                && (0..l).any(|e| self.count[e] == 0 && self.kappas[e] == self.kappas[l])
            {
                continue;
            }
            out.push(l);
        }
        out
    }

    fn assign(&mut self, k: usize, l: usize) {
        self.labels[k] = l;
        self.deficit[l] -= self.space.mass(self.order[k]);
        self.count[l] += 1;
    }

    fn unassign(&mut self, k: usize, l: usize) {
        self.labels[k] = UNUSED;
        self.deficit[l] += self.space.mass(self.order[k]);
        self.count[l] -= 1;
    }

    /// Smallest distance from the point at depth `k` to an earlier point
    /// carrying a label other than `l`.
    fn cross(&self, k: usize, l: usize) -> f64 {
        let p = self.order[k];
        let mut best = f64::INFINITY;
        for j in 0..k {
            let lj = self.labels[j];
            if lj != UNUSED && lj != l {
                best = best.min(self.space.dist(p, self.order[j]));
            }
        }
        best
    }

    fn exact(&mut self, k: usize, cur_min: f64) {
        self.nodes += 1;
        if self.best_labels.is_some() && (cur_min <= self.best || self.best >= self.upper) {
            return;
        }
        if self.outstanding() <= 0.0 {
            self.best = cur_min.min(self.upper);
            let mut labels = self.labels.clone();
            labels[k..].iter_mut().for_each(|l| *l = UNUSED);
            self.best_labels = Some(labels);
            return;
        }
        if k == self.order.len() || self.outstanding() > self.suffix_mass[k] + MASS_TOL {
            return;
        }
        for l in self.choices() {
            let m = cur_min.min(self.cross(k, l));
            self.assign(k, l);
            self.exact(k + 1, m);
            self.unassign(k, l);
        }
        self.exact(k + 1, cur_min);
    }

    /// Mass that points from depth `k` on could still add to label `l`
    /// without sitting closer than `r` to another label.
    fn reachable(&self, k: usize, l: usize, r: f64) -> f64 {
        (k..self.order.len())
            .filter(|&i| self.cross(i, l) >= r)
            .map(|i| self.space.mass(self.order[i]))
            .sum()
    }

    fn threshold(&mut self, k: usize, r: f64) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(Error::capacity(
                "separation threshold search nodes",
                self.node_budget,
                "raise the node budget",
            ));
        }
        if self.outstanding() <= 0.0 {
            self.labels[k..].iter_mut().for_each(|l| *l = UNUSED);
            return Ok(true);
        }
        if k == self.order.len() || self.outstanding() > self.suffix_mass[k] + MASS_TOL {
            return Ok(false);
        }
        for l in 0..self.kappas.len() {
            if self.deficit[l] > 0.0 && self.reachable(k, l, r) < self.deficit[l] {
                return Ok(false);
            }
        }
        let mut choices = self.choices();
        // most starved label first
        choices.sort_by(|&a, &b| self.deficit[b].total_cmp(&self.deficit[a]));
        for l in choices {
            if self.cross(k, l) < r {
                continue;
            }
            self.assign(k, l);
            if self.threshold(k + 1, r)? {
                return Ok(true);
            }
            self.unassign(k, l);
        }
        self.threshold(k + 1, r)
    }
}
