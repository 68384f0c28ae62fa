//! Observable diameter `ObsDiam(X; -κ)`.
//!
//! Three solvers share one report type:
//!
//! * [`obs_diam_exact`] enumerates the orders in which a 1-Lipschitz function
//!   can rank the points. For a fixed order the partial diameter of the
//!   pushforward is the minimum of `f(last) - f(first)` over the heavy
//!   windows of that order, so maximizing it is a system of difference
//!   constraints with one free parameter `t`. The largest feasible `t` is the
//!   minimum mean cycle of the graph whose nodes are the heavy windows.
//! * [`obs_diam_grid`] searches 1-Lipschitz functions with values on a
//!   uniform grid.
//! * [`obs_diam_heuristic`] evaluates distance-like candidate functions and
//!   polishes the best one by coordinate moves; it returns a certified lower
//!   bound.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lipschitz::LipschitzFunction;
use crate::measure::{pushforward_partial_diameter, window_scan};
use crate::rng;
use crate::space::FiniteMMSpace;
use crate::MASS_TOL;

/// Default point cap of the exact and grid solvers.
pub const EXACT_CAP: usize = 7;

/// Default number of grid steps per maximal distance.
pub const GRID_DIVISIONS: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolverMode {
    Exact,
    Grid { resolution: f64 },
    Heuristic,
}

impl SolverMode {
    /// Additive accuracy guaranteed by the solver (infinite for heuristics,
    /// which only bound from below).
    pub fn tolerance(&self) -> f64 {
        match self {
            SolverMode::Exact => 1e-9,
            SolverMode::Grid { resolution } => 2.0 * resolution,
            SolverMode::Heuristic => f64::INFINITY,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SolverMode::Exact => "exact",
            SolverMode::Grid { .. } => "grid",
            SolverMode::Heuristic => "heuristic",
        }
    }
}

/// Work counters reported next to every solution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Orders, grid leaves or candidate functions evaluated.
    pub evaluated: u64,
    /// Accepted local-search moves (heuristic only).
    pub improved: u64,
}

/// Value, certificate and provenance of one observable-diameter solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObsDiamReport {
    pub kappa: f64,
    pub value: f64,
    pub witness: LipschitzFunction,
    pub mode: SolverMode,
    pub counters: Counters,
    pub seed: Option<u64>,
}

impl ObsDiamReport {
    fn trivial(space: &FiniteMMSpace, kappa: f64, mode: SolverMode, seed: Option<u64>) -> Self {
        ObsDiamReport {
            kappa,
            value: 0.0,
            witness: LipschitzFunction::zero(space.len()),
            mode,
            counters: Counters::default(),
            seed,
        }
    }
}

/// Objective `diam(f_*μ; 1-κ)` of a candidate function.
pub fn objective(space: &FiniteMMSpace, f: &[f64], kappa: f64) -> f64 {
    if kappa >= 1.0 {
        return 0.0;
    }
    pushforward_partial_diameter(f, space.masses(), 1.0 - kappa)
}

/// Common argument checks; `Ok(true)` means the answer is trivially 0.
fn precheck(space: &FiniteMMSpace, kappa: f64, op: &str) -> Result<bool> {
    if !(kappa > 0.0) {
        return Err(Error::invalid(format!(
            "kappa must be positive, got {kappa}"
        )));
    }
    space.require_finite(op)?;
    Ok(kappa >= 1.0 || space.len() <= 1)
}

// ---------------------------------------------------------------------------
// exact solver

/// Exact observable diameter with the default cap of [`EXACT_CAP`] points.
pub fn obs_diam_exact(space: &FiniteMMSpace, kappa: f64) -> Result<ObsDiamReport> {
    obs_diam_exact_capped(space, kappa, EXACT_CAP)
}

pub fn obs_diam_exact_capped(
    space: &FiniteMMSpace,
    kappa: f64,
    cap: usize,
) -> Result<ObsDiamReport> {
    if precheck(space, kappa, "the exact observable-diameter solver")? {
        return Ok(ObsDiamReport::trivial(
            space,
            kappa,
            SolverMode::Exact,
            None,
        ));
    }
    let n = space.len();
    if n > cap {
        return Err(Error::capacity(
            format!("exact observable diameter on {n} points"),
            cap as u64,
            "use the grid or heuristic mode",
        ));
    }
    let alpha = 1.0 - kappa;
    let (best_t, best_perm, evaluated) = best_order(space, alpha);
    let witness = witness_for_order(space, &best_perm, alpha, best_t);
    let value = objective(space, witness.values(), kappa);
    debug_assert!(value >= best_t - 1e-9 * (1.0 + best_t));
    Ok(ObsDiamReport {
        kappa,
        value,
        witness,
        mode: SolverMode::Exact,
        counters: Counters {
            evaluated,
            improved: 0,
        },
        seed: None,
    })
}

/// Maximum over orders (up to reflection) of the per-order optimum.
///
/// Ties resolve to the lexicographically smallest order, so the parallel and
/// serial reductions agree.
fn best_order(space: &FiniteMMSpace, alpha: f64) -> (f64, Vec<usize>, u64) {
    let n = space.len();
    let per_first = |first: usize| -> (f64, Vec<usize>, u64) {
        let mut rest: Vec<usize> = (0..n).filter(|&p| p != first).collect();
        let mut perm = vec![0; n];
        let mut best = (-1.0, Vec::new(), 0u64);
        loop {
            if first < *rest.last().unwrap() {
                perm[0] = first;
                perm[1..].copy_from_slice(&rest);
                let t = order_optimum(space, &perm, alpha);
                best.2 += 1;
                if t > best.0 {
                    best.0 = t;
                    best.1 = perm.clone();
                }
            }
            if !next_permutation(&mut rest) {
                break;
            }
        }
        best
    };
    let firsts: Vec<usize> = (0..n - 1).collect();
    #[cfg(feature = "parallel")]
    let results: Vec<_> = {
        use rayon::prelude::*;
        firsts.par_iter().map(|&p| per_first(p)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<_> = firsts.iter().map(|&p| per_first(p)).collect();

    let evaluated = results.iter().map(|r| r.2).sum();
    let (t, perm, _) =
        results.into_iter().fold(
            (-1.0, Vec::new(), 0),
            |acc, r| if r.0 > acc.0 { r } else { acc },
        );
    (t, perm, evaluated)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Heavy windows `(i, j)` of the order: for each start `i` the shortest run
/// `perm[i..=j]` carrying mass at least `alpha`.
fn heavy_windows(space: &FiniteMMSpace, perm: &[usize], alpha: f64) -> Vec<(usize, usize)> {
    let n = perm.len();
    let target = alpha - MASS_TOL;
    let mut windows = Vec::with_capacity(n);
    let mut j = 0;
    let mut mass = 0.0;
    for i in 0..n {
        if j < i {
            j = i;
            mass = 0.0;
        }
        while j < n && mass < target {
            mass += space.mass(perm[j]);
            j += 1;
        }
        if mass < target {
            break;
        }
        windows.push((i, j - 1));
        mass -= space.mass(perm[i]);
    }
    windows
}

/// Shortest-path closure of the constraints `f_b ≤ f_a + w(a → b)` that do
/// not involve `t`: Lipschitz bounds plus monotonicity along the order.
fn closure(space: &FiniteMMSpace, perm: &[usize]) -> Vec<f64> {
    let n = perm.len();
    let mut p = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            p[a * n + b] = space.dist(perm[a], perm[b]);
        }
    }
    for k in 0..n - 1 {
        p[(k + 1) * n + k] = 0.0;
    }
    for k in 0..n {
        for a in 0..n {
            let pak = p[a * n + k];
            for b in 0..n {
                let via = pak + p[k * n + b];
                if via < p[a * n + b] {
                    p[a * n + b] = via;
                }
            }
        }
    }
    p
}

/// Largest `t` such that some function nondecreasing along `perm` satisfies
/// the Lipschitz bounds and spans at least `t` on every heavy window.
fn order_optimum(space: &FiniteMMSpace, perm: &[usize], alpha: f64) -> f64 {
    let windows = heavy_windows(space, perm, alpha);
    let n = perm.len();
    let p = closure(space, perm);
    // window edge j -> i carries weight -t; between two window edges the
    // cheapest connection is the closure path i -> j'
    let m = windows.len();
    let cost = |a: usize, b: usize| p[windows[a].0 * n + windows[b].1];
    min_mean_cycle(m, cost)
}

/// Karp's minimum mean cycle on a complete digraph with `m` nodes.
fn min_mean_cycle(m: usize, cost: impl Fn(usize, usize) -> f64) -> f64 {
    let mut d = vec![vec![0.0f64; m]; m + 1];
    for k in 1..=m {
        for v in 0..m {
            let mut best = f64::INFINITY;
            for u in 0..m {
                let c = d[k - 1][u] + cost(u, v);
                if c < best {
                    best = c;
                }
            }
            d[k][v] = best;
        }
    }
    (0..m)
        .map(|v| {
            (0..m)
                .map(|k| (d[m][v] - d[k][v]) / (m - k) as f64)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Potentials of the constraint system at `t`, returned in point order and
/// shifted so that point 0 sits at 0. When rounding makes the critical cycle
/// look negative, `t` is relaxed by a few ulps until the system settles.
fn witness_for_order(
    space: &FiniteMMSpace,
    perm: &[usize],
    alpha: f64,
    t: f64,
) -> LipschitzFunction {
    let n = perm.len();
    let windows = heavy_windows(space, perm, alpha);
    let mut edges: Vec<(usize, usize, f64)> = Vec::with_capacity(n * n + n);
    for a in 0..n {
        for b in 0..n {
            if a != b {
                edges.push((a, b, space.dist(perm[a], perm[b])));
            }
        }
    }
    for k in 0..n - 1 {
        edges.push((k + 1, k, 0.0));
    }
    let mut slack = 0.0;
    loop {
        let tw = (t - slack).max(0.0);
        let mut pot = vec![0.0f64; n];
        let mut changed = true;
        let mut rounds = 0;
        let window_edges = windows.iter().map(|&(i, j)| (j, i, -tw));
        let all: Vec<(usize, usize, f64)> = edges.iter().copied().chain(window_edges).collect();
        while changed && rounds <= n + 1 {
            changed = false;
            rounds += 1;
            for &(a, b, w) in &all {
                if pot[a] + w < pot[b] {
                    pot[b] = pot[a] + w;
                    changed = true;
                }
            }
        }
        if !changed {
            let mut values = vec![0.0; n];
            for (k, &p) in perm.iter().enumerate() {
                values[p] = pot[k];
            }
            let base = values[0];
            values.iter_mut().for_each(|v| *v -= base);
            return LipschitzFunction::new(values);
        }
        slack = if slack == 0.0 {
            1e-15 * (1.0 + t.abs())
        } else {
            slack * 16.0
        };
    }
}

// ---------------------------------------------------------------------------
// grid solver

/// Options of [`obs_diam_grid`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub cap: usize,
    /// Maximum number of grid leaves evaluated before giving up.
    pub leaf_budget: u64,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            cap: EXACT_CAP,
            leaf_budget: 2_000_000_000,
        }
    }
}

/// Grid search over 1-Lipschitz functions with `f(0) = 0` and every other
/// value in `{-Dmax, ..., Dmax}` at step `resolution`.
pub fn obs_diam_grid(space: &FiniteMMSpace, kappa: f64, resolution: f64) -> Result<ObsDiamReport> {
    obs_diam_grid_with(space, kappa, resolution, &GridOptions::default())
}

pub fn obs_diam_grid_with(
    space: &FiniteMMSpace,
    kappa: f64,
    resolution: f64,
    opts: &GridOptions,
) -> Result<ObsDiamReport> {
    if !(resolution > 0.0) || !resolution.is_finite() {
        return Err(Error::invalid(format!(
            "resolution must be positive, got {resolution}"
        )));
    }
    let mode = SolverMode::Grid { resolution };
    if precheck(space, kappa, "the grid observable-diameter solver")? {
        return Ok(ObsDiamReport::trivial(space, kappa, mode, None));
    }
    let n = space.len();
    if n > opts.cap {
        return Err(Error::capacity(
            format!("grid observable diameter on {n} points"),
            opts.cap as u64,
            "use the heuristic mode",
        ));
    }
    let dmax = space.max_finite_distance();
    let steps = (dmax / resolution + 1e-9).floor() as i64;
    let mut search = GridSearch {
        space,
        alpha: 1.0 - kappa,
        resolution,
        steps,
        values: vec![0.0; n],
        best: -1.0,
        best_values: vec![0.0; n],
        leaves: 0,
        budget: opts.leaf_budget,
    };
    search.descend(1, false)?;
    Ok(ObsDiamReport {
        kappa,
        value: search.best.max(0.0),
        witness: LipschitzFunction::new(search.best_values),
        mode,
        counters: Counters {
            evaluated: search.leaves,
            improved: 0,
        },
        seed: None,
    })
}

struct GridSearch<'a> {
    space: &'a FiniteMMSpace,
    alpha: f64,
    resolution: f64,
    steps: i64,
    values: Vec<f64>,
    best: f64,
    best_values: Vec<f64>,
    leaves: u64,
    budget: u64,
}

impl GridSearch<'_> {
    /// `signed` records whether some earlier coordinate is nonzero; until
    /// then only nonnegative values are tried (`f` and `-f` score alike).
    fn descend(&mut self, c: usize, signed: bool) -> Result<()> {
        let n = self.values.len();
        if c == n {
            self.leaves += 1;
            if self.leaves > self.budget {
                return Err(Error::capacity(
                    "grid leaves",
                    self.budget,
                    "coarsen the resolution or use the exact mode",
                ));
            }
            let v = pushforward_partial_diameter(&self.values, self.space.masses(), self.alpha);
            if v > self.best {
                self.best = v;
                self.best_values.copy_from_slice(&self.values);
            }
            return Ok(());
        }
        if self.range_bound(c) <= self.best {
            return Ok(());
        }
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for a in 0..c {
            let d = self.space.dist(a, c);
            lo = lo.max(self.values[a] - d);
            hi = hi.min(self.values[a] + d);
        }
        let eps = 1e-12 * (1.0 + hi.abs().max(lo.abs()));
        let mut k_lo = ((lo - eps) / self.resolution).ceil() as i64;
        let k_hi = (((hi + eps) / self.resolution).floor() as i64).min(self.steps);
        k_lo = k_lo.max(-self.steps);
        if !signed {
            k_lo = k_lo.max(0);
        }
        for k in k_lo..=k_hi {
            let v = k as f64 * self.resolution;
            if (0..c).any(|a| (v - self.values[a]).abs() > self.space.dist(a, c) + eps) {
                continue;
            }
            self.values[c] = v;
            self.descend(c + 1, signed || k != 0)?;
        }
        Ok(())
    }

    /// Upper bound on the final range `max f - min f` given the first `c`
    /// coordinates; the objective never exceeds the range.
    fn range_bound(&self, c: usize) -> f64 {
        let n = self.values.len();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for a in 0..c {
            lo = lo.min(self.values[a]);
            hi = hi.max(self.values[a]);
        }
        for r in c..n {
            let (mut rlo, mut rhi) = (f64::NEG_INFINITY, f64::INFINITY);
            for a in 0..c {
                let d = self.space.dist(a, r);
                rlo = rlo.max(self.values[a] - d);
                rhi = rhi.min(self.values[a] + d);
            }
            lo = lo.min(rlo);
            hi = hi.max(rhi);
        }
        hi - lo
    }
}

// ---------------------------------------------------------------------------
// heuristic

/// Candidate family and search effort of [`obs_diam_heuristic`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HeuristicConfig {
    /// Anchor counts of the multi-anchor candidates `min_j d(x, p_j) + c_j`.
    pub anchors: Vec<usize>,
    pub restarts: usize,
    pub seed: u64,
    /// Local search runs only on spaces with at most this many points.
    pub local_search_max_points: usize,
    /// Adjacent-swap search over rankings runs up to this many points.
    pub order_search_max_points: usize,
    /// Number of top candidates per `κ` handed to the local searches.
    pub polish_starts: usize,
    pub sweeps: usize,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig {
            anchors: vec![1, 2, 3],
            restarts: 64,
            seed: 0,
            local_search_max_points: 256,
            order_search_max_points: 48,
            polish_starts: 4,
            sweeps: 8,
        }
    }
}

/// Certified lower bound on `ObsDiam(X; -κ)`.
pub fn obs_diam_heuristic(
    space: &FiniteMMSpace,
    kappa: f64,
    config: &HeuristicConfig,
) -> Result<ObsDiamReport> {
    Ok(obs_diam_heuristic_profile(space, &[kappa], config)?.remove(0))
}

/// Heuristic lower bounds for several `κ` sharing one candidate pool.
///
/// The final witnesses of all `κ` are cross-evaluated, which makes the
/// returned values nonincreasing in `κ`.
pub fn obs_diam_heuristic_profile(
    space: &FiniteMMSpace,
    kappas: &[f64],
    config: &HeuristicConfig,
) -> Result<Vec<ObsDiamReport>> {
    for &k in kappas {
        precheck(space, k, "the heuristic observable-diameter solver")?;
    }
    let n = space.len();
    let seed = Some(config.seed);
    if n <= 1 {
        return Ok(kappas
            .iter()
            .map(|&k| ObsDiamReport::trivial(space, k, SolverMode::Heuristic, seed))
            .collect());
    }
    // the best few candidates per κ, best first
    let keep = config.polish_starts.max(1);
    let mut pools: Vec<Vec<(f64, Vec<f64>)>> = vec![Vec::new(); kappas.len()];
    let mut evaluated = 0u64;
    let mut consider = |f: Vec<f64>, pools: &mut [Vec<(f64, Vec<f64>)>]| {
        evaluated += 1;
        for (pool, s) in pools.iter_mut().zip(objectives(space, &f, kappas)) {
            if pool.len() == keep && s <= pool[keep - 1].0 {
                continue;
            }
            if pool.iter().any(|(_, g)| *g == f) {
                continue;
            }
            let at = pool.iter().position(|(t, _)| s > *t).unwrap_or(pool.len());
            pool.insert(at, (s, f.clone()));
            pool.truncate(keep);
        }
    };

    for p in 0..n {
        consider(space.row(p).to_vec(), &mut pools);
    }
    let dmax = space.max_finite_distance();
    let mut rng = rng::stream(config.seed, 0x0b5d);
    let points: Vec<usize> = (0..n).collect();
    for _ in 0..config.restarts {
        for &k in &config.anchors {
            let k = k.clamp(1, n);
            let anchors: Vec<usize> = points.choose_multiple(&mut rng, k).copied().collect();
            let offsets: Vec<f64> = (0..k).map(|_| rng.random::<f64>() * dmax).collect();
            consider(min_plus(space, &anchors, &offsets), &mut pools);
        }
        // distance to a random subset
        let size = rng.random_range(1..n);
        let subset: Vec<usize> = points.choose_multiple(&mut rng, size).copied().collect();
        consider(min_plus(space, &subset, &vec![0.0; size]), &mut pools);
        // McShane extension of evenly spread values on a random order
        let mut order = points.clone();
        order.shuffle(&mut rng);
        let spread = rng.random::<f64>().max(0.25) * dmax;
        let offsets: Vec<f64> = (0..n).map(|i| spread * i as f64 / (n - 1) as f64).collect();
        consider(min_plus(space, &order, &offsets), &mut pools);
    }

    let mut improved = 0u64;
    let mut best: Vec<(f64, Vec<f64>)> = pools.iter().map(|p| p[0].clone()).collect();
    if n <= config.local_search_max_points && dmax > 0.0 {
        for ((&kappa, pool), slot) in kappas.iter().zip(pools).zip(best.iter_mut()) {
            for (score, f) in pool {
                let (score, f) = polish_order(space, kappa, f, score);
                let (score, f, moves) = local_search(space, kappa, f, score, dmax, config.sweeps);
                let (score, f) = polish_order(space, kappa, f, score);
                let (score, f) = if n <= config.order_search_max_points {
                    order_search(space, kappa, f, score, config.sweeps)
                } else {
                    (score, f)
                };
                improved += moves;
                if score > slot.0 {
                    *slot = (score, f);
                }
            }
        }
    }

    // cross-evaluate final witnesses
    let finals: Vec<Vec<f64>> = best.iter().map(|b| b.1.clone()).collect();
    for f in finals {
        let scores = objectives(space, &f, kappas);
        for (i, s) in scores.into_iter().enumerate() {
            if s > best[i].0 {
                best[i] = (s, f.clone());
            }
        }
    }

    Ok(kappas
        .iter()
        .zip(best)
        .map(|(&kappa, (value, f))| ObsDiamReport {
            kappa,
            value: value.max(0.0),
            witness: LipschitzFunction::new(f),
            mode: SolverMode::Heuristic,
            counters: Counters {
                evaluated,
                improved,
            },
            seed,
        })
        .collect())
}

/// `x ↦ min_j d(x, anchors[j]) + offsets[j]`, 1-Lipschitz as a minimum of
/// 1-Lipschitz functions.
fn min_plus(space: &FiniteMMSpace, anchors: &[usize], offsets: &[f64]) -> Vec<f64> {
    (0..space.len())
        .map(|x| {
            anchors
                .iter()
                .zip(offsets)
                .map(|(&p, &c)| space.dist(x, p) + c)
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Objective of one function at every `κ`, sorting once.
fn objectives(space: &FiniteMMSpace, f: &[f64], kappas: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..f.len()).collect();
    idx.sort_by(|&a, &b| f[a].total_cmp(&f[b]));
    let mut positions = Vec::with_capacity(f.len());
    let mut masses: Vec<f64> = Vec::with_capacity(f.len());
    for &i in &idx {
        match positions.last() {
            Some(&last) if last == f[i] => *masses.last_mut().unwrap() += space.mass(i),
            _ => {
                positions.push(f[i]);
                masses.push(space.mass(i));
            }
        }
    }
    kappas
        .iter()
        .map(|&k| {
            if k >= 1.0 {
                0.0
            } else {
                window_scan(&positions, &masses, 1.0 - k - MASS_TOL).map_or(0.0, |w| w.length)
            }
        })
        .collect()
}

/// Best function ranking the points in the same order as `f`.
///
/// `f` itself is feasible for its own order, so this never loses value.
fn polish_order(space: &FiniteMMSpace, kappa: f64, f: Vec<f64>, score: f64) -> (f64, Vec<f64>) {
    let mut perm: Vec<usize> = (0..f.len()).collect();
    perm.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));
    let alpha = 1.0 - kappa;
    let t = order_optimum(space, &perm, alpha);
    if t <= score {
        return (score, f);
    }
    let g = witness_for_order(space, &perm, alpha, t).into_values();
    let s = objective(space, &g, kappa);
    if s > score {
        (s, g)
    } else {
        (score, f)
    }
}

/// Hill climbing over rankings by adjacent transpositions, each ranking
/// scored by its exact per-order optimum.
fn order_search(
    space: &FiniteMMSpace,
    kappa: f64,
    f: Vec<f64>,
    score: f64,
    sweeps: usize,
) -> (f64, Vec<f64>) {
    let n = f.len();
    let alpha = 1.0 - kappa;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.sort_by(|&a, &b| f[a].total_cmp(&f[b]).then(a.cmp(&b)));
    let mut best_t = order_optimum(space, &perm, alpha);
    let start_t = best_t;
    for _ in 0..sweeps {
        let mut any = false;
        for k in 0..n - 1 {
            perm.swap(k, k + 1);
            let t = order_optimum(space, &perm, alpha);
            if t > best_t + 1e-12 * (1.0 + best_t) {
                best_t = t;
                any = true;
            } else {
                perm.swap(k, k + 1);
            }
        }
        if !any {
            break;
        }
    }
    if best_t <= start_t {
        return (score, f);
    }
    let g = witness_for_order(space, &perm, alpha, best_t).into_values();
    let s = objective(space, &g, kappa);
    if s > score {
        (s, g)
    } else {
        (score, f)
    }
}

/// Coordinate moves that keep `f` 1-Lipschitz, accepted on strict gain.
fn local_search(
    space: &FiniteMMSpace,
    kappa: f64,
    mut f: Vec<f64>,
    mut score: f64,
    dmax: f64,
    sweeps: usize,
) -> (f64, Vec<f64>, u64) {
    let n = f.len();
    let mut moves = 0;
    for step in [dmax / 16.0, dmax / 64.0, dmax / 256.0] {
        for _ in 0..sweeps {
            let mut any = false;
            for c in 0..n {
                let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
                for a in 0..n {
                    if a != c {
                        let d = space.dist(a, c);
                        lo = lo.max(f[a] - d);
                        hi = hi.min(f[a] + d);
                    }
                }
                if lo > hi {
                    // rounding noise around a tight coordinate
                    continue;
                }
                let current = f[c];
                for target in [current + step, current - step, lo, hi] {
                    let v = target.clamp(lo, hi);
                    if v == current || !v.is_finite() {
                        continue;
                    }
                    f[c] = v;
                    let s = objective(space, &f, kappa);
                    if s > score + 1e-15 {
                        score = s;
                        moves += 1;
                        any = true;
                        break;
                    }
                    f[c] = current;
                }
            }
            if !any {
                break;
            }
        }
    }
    (score, f, moves)
}
