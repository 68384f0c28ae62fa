//! Sampled measurements `M(X; N, R)` and the estimators built on them.
//!
//! A measurement is the pushforward of `μ_X` under a 1-Lipschitz map into
//! `(ℝ^N, ℓ∞)` whose image lies in the box `[-R, R]^N`. Samples start with
//! deterministic maps (the constant map, then one distance function per
//! point) and continue with random multi-anchor coordinates.

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::prokhorov::prokhorov;
use super::EstimateKind;
use crate::error::{Error, Result};
use crate::rng;
use crate::space::{AmbientMetric, FiniteMMSpace};

/// Atomic probability measure on `(ℝ^N, ℓ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointMeasure {
    pub atoms: Vec<(Vec<f64>, f64)>,
}

impl PointMeasure {
    /// Pushforward of `masses` along the rows of `points`, merging equal
    /// images.
    pub fn from_points(points: Vec<Vec<f64>>, masses: &[f64]) -> Self {
        let mut atoms: Vec<(Vec<f64>, f64)> = Vec::with_capacity(points.len());
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| lex(&points[a], &points[b]));
        for i in order {
            match atoms.last_mut() {
                Some((p, m)) if *p == points[i] => *m += masses[i],
                _ => atoms.push((points[i].clone(), masses[i])),
            }
        }
        PointMeasure { atoms }
    }

    pub fn sup_norm(&self) -> f64 {
        self.atoms
            .iter()
            .flat_map(|(p, _)| p.iter())
            .fold(0.0, |a, x| a.max(x.abs()))
    }
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Prokhorov distance of two measures on `ℝ^N` with the `ℓ∞` metric,
/// computed on the union of their supports.
pub fn prokhorov_points(a: &PointMeasure, b: &PointMeasure) -> Result<f64> {
    let mut points: Vec<&Vec<f64>> = a.atoms.iter().chain(&b.atoms).map(|(p, _)| p).collect();
    points.sort_by(|x, y| lex(x, y));
    points.dedup();
    let index = |p: &Vec<f64>| points.binary_search_by(|q| lex(q, p)).unwrap();
    let mut mu = vec![0.0; points.len()];
    let mut nu = vec![0.0; points.len()];
    for (p, m) in &a.atoms {
        mu[index(p)] += m;
    }
    for (p, m) in &b.atoms {
        nu[index(p)] += m;
    }
    let ambient = AmbientMetric::from_fn(points.len(), |i, j| sup_dist(points[i], points[j]));
    prokhorov(&ambient, &mu, &nu)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSample {
    pub dimension: usize,
    pub radius: f64,
    pub seed: u64,
    pub measures: Vec<PointMeasure>,
}

impl MeasurementSample {
    /// Every atom lies in the box `[-R, R]^N`.
    pub fn in_box(&self) -> bool {
        self.measures.iter().all(|m| {
            m.sup_norm() <= self.radius && m.atoms.iter().all(|(p, _)| p.len() == self.dimension)
        })
    }
}

/// One random 1-Lipschitz coordinate `min_j d(·, p_j) + c_j`.
fn random_coordinate(space: &FiniteMMSpace, rng: &mut impl Rng, dmax: f64) -> Vec<f64> {
    let points: Vec<usize> = (0..space.len()).collect();
    let k = rng.random_range(1..=3usize.min(space.len()));
    let anchors: Vec<usize> = points.choose_multiple(rng, k).copied().collect();
    let offsets: Vec<f64> = (0..k).map(|_| rng.random::<f64>() * dmax).collect();
    (0..space.len())
        .map(|x| {
            anchors
                .iter()
                .zip(&offsets)
                .map(|(&p, &c)| space.dist(x, p) + c)
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Shift to the midpoint of the range, then clamp into `[-r, r]`; both
/// steps keep the coordinate 1-Lipschitz.
fn center_clamp(mut f: Vec<f64>, r: f64) -> Vec<f64> {
    let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    f.iter_mut().for_each(|v| *v = (*v - mid).clamp(-r, r));
    f
}

/// `count` measurements of `space` in `M(X; N, R)`. The deterministic
/// seeds (constant map and one distance map per point) are always
/// included, so the sample may exceed `count`.
pub fn measurement_sample(
    space: &FiniteMMSpace,
    dimension: usize,
    radius: f64,
    count: usize,
    seed: u64,
) -> Result<MeasurementSample> {
    space.require_finite("measurement sampling")?;
    if dimension == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    if !(radius >= 0.0) || !radius.is_finite() {
        return Err(Error::invalid(format!(
            "radius must be finite and nonnegative, got {radius}"
        )));
    }
    let n = space.len();
    let dmax = space.max_finite_distance();
    let assemble = |coords: Vec<Vec<f64>>| {
        let points: Vec<Vec<f64>> = (0..n)
            .map(|x| coords.iter().map(|c| c[x]).collect())
            .collect();
        PointMeasure::from_points(points, space.masses())
    };
    let mut measures = vec![assemble(vec![vec![0.0; n]; dimension])];
    for p in 0..n {
        let mut coords = vec![vec![0.0; n]; dimension];
        coords[0] = center_clamp(space.row(p).to_vec(), radius);
        measures.push(assemble(coords));
    }
    let mut rng = rng::stream(seed, 0x5a3e);
    while measures.len() < count {
        let coords = (0..dimension)
            .map(|_| center_clamp(random_coordinate(space, &mut rng, dmax), radius))
            .collect();
        measures.push(assemble(coords));
    }
    Ok(MeasurementSample {
        dimension,
        radius,
        seed,
        measures,
    })
}

impl PointMeasure {
    fn translated(&self, t: &[f64]) -> PointMeasure {
        PointMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|(p, m)| (p.iter().zip(t).map(|(x, s)| x + s).collect(), *m))
                .collect(),
        }
    }
}

/// Largest number of atom pairs tried as alignment shifts.
const SHIFT_PAIRS: usize = 64;

/// Prokhorov distance from `b` to the closest translate of `a` among a few
/// candidates: no shift, and shifts landing an atom of `a` on an atom of `b`.
/// Only translates inside `[-radius, radius]^N` count. Measurement sets are
/// closed under such translations, so every candidate is a member.
pub fn prokhorov_up_to_shift(a: &PointMeasure, b: &PointMeasure, radius: f64) -> Result<f64> {
    let mut best = prokhorov_points(a, b)?;
    let mut tried = 0;
    'outer: for (pa, _) in &a.atoms {
        for (pb, _) in &b.atoms {
            if tried == SHIFT_PAIRS || best == 0.0 {
                break 'outer;
            }
            tried += 1;
            let t: Vec<f64> = pb.iter().zip(pa).map(|(y, x)| y - x).collect();
            let moved = a.translated(&t);
            if moved.sup_norm() <= radius {
                best = best.min(prokhorov_points(&moved, b)?);
            }
        }
    }
    Ok(best)
}

/// Hausdorff distance between two finite samples of translation-closed
/// measure sets in `[-radius, radius]^N`, under Prokhorov.
pub fn hausdorff(a: &[PointMeasure], b: &[PointMeasure], radius: f64) -> Result<f64> {
    Ok(hausdorff_from_matrix(&distance_matrix(a, b, radius)?))
}

/// Entry `(i, j)` is the smaller of the two shifted distances between
/// `a[i]` and `b[j]`.
fn distance_matrix(a: &[PointMeasure], b: &[PointMeasure], radius: f64) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = {
        let row = |m: &PointMeasure| {
            b.iter()
                .map(|n| {
                    Ok(prokhorov_up_to_shift(m, n, radius)?
                        .min(prokhorov_up_to_shift(n, m, radius)?))
                })
                .collect::<Result<Vec<f64>>>()
        };
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            a.par_iter().map(row).collect::<Result<_>>()?
        }
        #[cfg(not(feature = "parallel"))]
        {
            a.iter().map(row).collect::<Result<_>>()?
        }
    };
    Ok(rows)
}

fn hausdorff_from_matrix(rows: &[Vec<f64>]) -> f64 {
    if rows.is_empty() || rows[0].is_empty() {
        return 0.0;
    }
    let forward = rows
        .iter()
        .map(|r| r.iter().copied().fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let backward = (0..rows[0].len())
        .map(|j| rows.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    forward.max(backward)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub caveats: Vec<String>,
    /// Terms of a truncated series, when the estimate is one.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub terms: Vec<f64>,
    /// Bound on the omitted tail of a truncated series.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub remainder: Option<f64>,
}

/// `d_H(M(X;N), M(Y;N)) / N` on samples, as a lower estimate of the
/// observable distance.
///
/// The value is the running maximum over sample prefixes, hence
/// nondecreasing in `count` for a fixed seed.
pub fn dconc_lower_estimate(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    dimension: usize,
    count: usize,
    seed: u64,
) -> Result<Estimate> {
    let radius = x.max_finite_distance().max(y.max_finite_distance());
    let sx = measurement_sample(x, dimension, radius, count, seed)?;
    let sy = measurement_sample(y, dimension, radius, count, seed)?;
    let rows = distance_matrix(&sx.measures, &sy.measures, radius)?;
    // Hausdorff of every prefix pair (i, i) with the seeds aligned
    let k = sx.measures.len().min(sy.measures.len());
    let mut best = 0.0f64;
    for len in 1..=k {
        let prefix: Vec<Vec<f64>> = rows[..len].iter().map(|r| r[..len].to_vec()).collect();
        best = best.max(hausdorff_from_matrix(&prefix));
    }
    Ok(Estimate {
        value: best / dimension as f64,
        kind: EstimateKind::LowerBound,
        caveats: vec![
            "lower bound on the observable distance through d_H(M(X;N), M(Y;N)) ≤ N·dconc".into(),
            "measurement sets are replaced by finite samples (closed up to a few translations), which can move the Hausdorff distance either way".into(),
        ],
        terms: Vec::new(),
        remainder: None,
    })
}

/// Truncated `ρ_R` series over sampled measurement sets,
/// `Σ_{N ≤ N_max} d_H(M(X;N,NR), M(Y;N,NR)) / (N 2^{N+1})`.
pub fn rho_r_estimate(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    radius: f64,
    n_max: usize,
    count: usize,
    seed: u64,
) -> Result<Estimate> {
    if n_max == 0 {
        return Err(Error::invalid("need at least one dimension"));
    }
    let mut terms = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let r = n as f64 * radius;
        let sx = measurement_sample(x, n, r, count, seed)?;
        let sy = measurement_sample(y, n, r, count, seed)?;
        let w = 1.0 / (n as f64 * 2f64.powi(n as i32 + 1));
        terms.push(w * hausdorff(&sx.measures, &sy.measures, r)?);
    }
    // d_H ≤ min(1, 2NR): Prokhorov never exceeds 1 or the box diameter
    let remainder = (n_max + 1..n_max + 200)
        .map(|n| (2.0 * n as f64 * radius).min(1.0) / (n as f64 * 2f64.powi(n as i32 + 1)))
        .sum();
    Ok(Estimate {
        value: terms.iter().sum(),
        kind: EstimateKind::Estimate,
        caveats: vec![
            format!("series truncated after N = {n_max}"),
            "measurement sets are replaced by finite samples".into(),
        ],
        terms,
        remainder: Some(remainder),
    })
}
