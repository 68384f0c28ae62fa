//! Finite (possibly extended) metric measure spaces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::MASS_TOL;

/// Default point-count cap for [`FiniteMMSpace::partial_diameter`].
pub const PARTIAL_DIAMETER_CAP: usize = 20;

/// Upper bound on the number of violations collected by a validation pass.
const MAX_REPORTED_VIOLATIONS: usize = 256;

/// A finite mm-space `(X, d_X, μ_X)`.
///
/// Distances are stored row-major; `f64::INFINITY` is the extended value.
/// Construction through [`FiniteMMSpace::new`] enforces the axioms, while
/// [`FiniteMMSpace::from_parts_unchecked`] only checks shapes so that invalid
/// inputs can still be inspected with [`FiniteMMSpace::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpaceFile", into = "SpaceFile")]
pub struct FiniteMMSpace {
    labels: Vec<String>,
    dist: Vec<f64>,
    mass: Vec<f64>,
}

/// One violated axiom together with the indices witnessing it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    MassSum { sum: f64 },
    NonPositiveMass { index: usize, mass: f64 },
    NotANumber { i: usize, j: usize },
    NegativeDistance { i: usize, j: usize, value: f64 },
    NonzeroDiagonal { i: usize, value: f64 },
    Asymmetric { i: usize, j: usize },
    Triangle { i: usize, j: usize, k: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty space"),
            Violation::MassSum { sum } => write!(f, "mass sum {sum} ≠ 1"),
            Violation::NonPositiveMass { index, mass } => {
                write!(f, "nonpositive mass {mass} at point {index}")
            }
            Violation::NotANumber { i, j } => write!(f, "NaN distance at ({i},{j})"),
            Violation::NegativeDistance { i, j, value } => {
                write!(f, "negative distance {value} at ({i},{j})")
            }
            Violation::NonzeroDiagonal { i, value } => {
                write!(f, "nonzero diagonal {value} at point {i}")
            }
            Violation::Asymmetric { i, j } => write!(f, "asymmetric pair ({i},{j})"),
            Violation::Triangle { i, j, k } => write!(f, "triangle ({i},{j},{k})"),
        }
    }
}

/// Result of [`FiniteMMSpace::validate`]; empty iff every axiom holds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Set when more violations existed than were recorded.
    pub truncated: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) {
        if self.violations.len() < MAX_REPORTED_VIOLATIONS {
            self.violations.push(v);
        } else {
            self.truncated = true;
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))?;
        if self.truncated {
            write!(f, "; ...")?;
        }
        Ok(())
    }
}

impl FiniteMMSpace {
    /// Builds a space and checks every axiom.
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>, mass: Vec<f64>) -> Result<Self> {
        let space = Self::from_parts_unchecked(labels, dist, mass)?;
        let report = space.validate();
        if report.is_valid() {
            Ok(space)
        } else {
            Err(Error::InvalidSpace(report.to_string()))
        }
    }

    /// Builds a space after checking shapes only.
    pub fn from_parts_unchecked(
        labels: Vec<String>,
        dist: Vec<Vec<f64>>,
        mass: Vec<f64>,
    ) -> Result<Self> {
        let n = mass.len();
        if labels.len() != n {
            return Err(Error::invalid(format!(
                "{} labels for {} masses",
                labels.len(),
                n
            )));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::invalid(format!("distance matrix must be {n}x{n}")));
        }
        Ok(FiniteMMSpace {
            labels,
            dist: dist.into_iter().flatten().collect(),
            mass,
        })
    }

    /// Builds a space from a distance function, labelling points `0..n`.
    ///
    /// The caller guarantees the axioms; no triangle check is performed so
    /// that large generated spaces stay cheap to build.
    pub fn from_fn(mass: Vec<f64>, mut dist: impl FnMut(usize, usize) -> f64) -> Self {
        let n = mass.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = dist(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        FiniteMMSpace {
            labels: (0..n).map(|i| i.to_string()).collect(),
            dist: d,
            mass,
        }
    }

    /// Uniform probability on `n` points with the given distance function.
    pub fn uniform(n: usize, dist: impl FnMut(usize, usize) -> f64) -> Self {
        Self::from_fn(vec![1.0 / n as f64; n], dist)
    }

    /// Points of the real line with the induced metric.
    pub fn on_line(positions: &[f64], mass: Vec<f64>) -> Self {
        Self::from_fn(mass, |i, j| (positions[i] - positions[j]).abs())
    }

    /// The one-point space `*`.
    pub fn one_point() -> Self {
        Self::uniform(1, |_, _| 0.0)
    }

    /// Two points at distance `d` with masses `(m, 1 - m)`.
    pub fn two_point(d: f64, m: f64) -> Self {
        Self::from_fn(vec![m, 1.0 - m], |_, _| d)
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.mass[i]
    }

    pub fn masses(&self) -> &[f64] {
        &self.mass
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn has_infinite_distance(&self) -> bool {
        self.dist.iter().any(|d| d.is_infinite())
    }

    /// Largest finite distance (0 for a one-point space).
    pub fn max_finite_distance(&self) -> f64 {
        self.dist
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }

    /// Sorted, deduplicated off-diagonal distances.
    pub fn distinct_distances(&self) -> Vec<f64> {
        let n = self.len();
        let mut values: Vec<f64> = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| self.dist(i, j))
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        values
    }

    pub(crate) fn require_finite(&self, op: &str) -> Result<()> {
        if self.has_infinite_distance() {
            Err(Error::needs_truncation(op))
        } else {
            Ok(())
        }
    }

    /// Checks every axiom with the default mass tolerance.
    pub fn validate(&self) -> ValidationReport {
        self.validate_with(MASS_TOL)
    }

    /// Checks normalization, positivity, symmetry, zero diagonal and the
    /// triangle inequality (with `∞` absorbing).
    pub fn validate_with(&self, mass_tol: f64) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.len();
        if n == 0 {
            report.push(Violation::Empty);
            return report;
        }
        let sum: f64 = self.mass.iter().sum();
        if !((sum - 1.0).abs() <= mass_tol) {
            report.push(Violation::MassSum { sum });
        }
        for (index, &mass) in self.mass.iter().enumerate() {
            if !(mass > 0.0) {
                report.push(Violation::NonPositiveMass { index, mass });
            }
        }
        let mut numeric = true;
        for i in 0..n {
            for j in 0..n {
                let d = self.dist(i, j);
                if d.is_nan() {
                    report.push(Violation::NotANumber { i, j });
                    numeric = false;
                } else if d < 0.0 {
                    report.push(Violation::NegativeDistance { i, j, value: d });
                } else if i == j && d != 0.0 {
                    report.push(Violation::NonzeroDiagonal { i, value: d });
                } else if i < j && d != self.dist(j, i) {
                    report.push(Violation::Asymmetric { i, j });
                }
            }
        }
        if !numeric {
            return report;
        }
        for i in 0..n {
            for k in (i + 1)..n {
                let direct = self.dist(i, k);
                for j in 0..n {
                    if j == i || j == k {
                        continue;
                    }
                    let via = self.dist(i, j) + self.dist(j, k);
                    if direct > via + 1e-12 * (1.0 + via) {
                        report.push(Violation::Triangle {
                            i: i.min(k),
                            j,
                            k: i.max(k),
                        });
                    }
                }
            }
        }
        report
    }

    /// The scaled space `tX` with metric `t·d_X`.
    pub fn scale(&self, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!(
                "scale factor must be positive, got {t}"
            )));
        }
        Ok(FiniteMMSpace {
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|&d| d * t).collect(),
            mass: self.mass.clone(),
        })
    }

    /// The truncation `X^D` with metric `min(d_X, D)`.
    pub fn truncate(&self, cap: f64) -> Result<Self> {
        if !(cap > 0.0) || !cap.is_finite() {
            return Err(Error::invalid(format!(
                "truncation level must be positive and finite, got {cap}"
            )));
        }
        Ok(FiniteMMSpace {
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|&d| d.min(cap)).collect(),
            mass: self.mass.clone(),
        })
    }

    /// Partial diameter `diam(X; α)` with the default point-count cap.
    pub fn partial_diameter(&self, alpha: f64) -> Result<f64> {
        self.partial_diameter_capped(alpha, PARTIAL_DIAMETER_CAP)
    }

    /// Minimum over subsets `S` with `μ(S) ≥ α` of the diameter of `S`.
    ///
    /// Exact branch-and-bound over subsets; the incumbent diameter prunes
    /// every branch whose partial diameter already reaches it.
    pub fn partial_diameter_capped(&self, alpha: f64, cap: usize) -> Result<f64> {
        check_alpha(alpha)?;
        let n = self.len();
        if n > cap {
            return Err(Error::capacity(
                format!("exact partial diameter on {n} points"),
                cap as u64,
                "raise the cap or project to the line with pushforward_to_line",
            ));
        }
        let target = alpha - MASS_TOL;
        if self.mass.iter().any(|&m| m >= target) {
            return Ok(0.0);
        }
        // heavier points first so that feasible subsets are reached early
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.mass[b].total_cmp(&self.mass[a]).then(a.cmp(&b)));
        let mut suffix = vec![0.0; n + 1];
        for k in (0..n).rev() {
            suffix[k] = suffix[k + 1] + self.mass[order[k]];
        }
        let mut search = SubsetSearch {
            space: self,
            order: &order,
            suffix: &suffix,
            target,
            best: self.dist.iter().copied().fold(0.0, f64::max),
            chosen: Vec::with_capacity(n),
        };
        search.descend(0, 0.0, 0.0);
        Ok(search.best)
    }
}

struct SubsetSearch<'a> {
    space: &'a FiniteMMSpace,
    order: &'a [usize],
    suffix: &'a [f64],
    target: f64,
    best: f64,
    chosen: Vec<usize>,
}

impl SubsetSearch<'_> {
    fn descend(&mut self, k: usize, diam: f64, mass: f64) {
        if k == self.order.len() || mass + self.suffix[k] < self.target {
            return;
        }
        let p = self.order[k];
        let with = self
            .chosen
            .iter()
            .map(|&q| self.space.dist(p, q))
            .fold(diam, f64::max);
        if with < self.best {
            let m = mass + self.space.mass(p);
            if m >= self.target {
                self.best = with;
            } else {
                self.chosen.push(p);
                self.descend(k + 1, with, m);
                self.chosen.pop();
            }
        }
        self.descend(k + 1, diam, mass);
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )))
    }
}

/// A finite metric used as the common ambient of measures.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientMetric {
    n: usize,
    dist: Vec<f64>,
}

impl AmbientMetric {
    pub fn new(dist: Vec<Vec<f64>>) -> Result<Self> {
        let n = dist.len();
        if dist.iter().any(|row| row.len() != n) {
            return Err(Error::invalid("ambient distance matrix must be square"));
        }
        let flat: Vec<f64> = dist.into_iter().flatten().collect();
        if flat.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::invalid(
                "ambient distances must be finite and nonnegative",
            ));
        }
        Ok(AmbientMetric { n, dist: flat })
    }

    pub fn from_fn(n: usize, mut dist: impl FnMut(usize, usize) -> f64) -> Self {
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = dist(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        AmbientMetric { n, dist: d }
    }

    pub fn of_space(space: &FiniteMMSpace) -> Result<Self> {
        space.require_finite("an ambient metric")?;
        Ok(AmbientMetric {
            n: space.len(),
            dist: space.dist.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Sorted distinct distances, always including 0.
    pub fn distance_levels(&self) -> Vec<f64> {
        let mut v = self.dist.clone();
        v.push(0.0);
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
}

// ---------------------------------------------------------------------------
// JSON file format: {"labels":[...],"dist":[[...]],"mass":[...]}, "inf" token.

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum DistEntry {
    Number(f64),
    Token(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpaceFile {
    /// Point indices when absent.
    #[serde(default)]
    labels: Vec<String>,
    dist: Vec<Vec<DistEntry>>,
    mass: Vec<f64>,
}

impl TryFrom<SpaceFile> for FiniteMMSpace {
    type Error = Error;

    fn try_from(file: SpaceFile) -> Result<Self> {
        let dist = file
            .dist
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|entry| match entry {
                        DistEntry::Number(x) => Ok(x),
                        DistEntry::Token(t) if t == "inf" => Ok(f64::INFINITY),
                        DistEntry::Token(t) => {
                            Err(Error::invalid(format!("unknown distance token {t:?}")))
                        }
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = if file.labels.is_empty() {
            (0..file.mass.len()).map(|i| i.to_string()).collect()
        } else {
            file.labels
        };
        FiniteMMSpace::from_parts_unchecked(labels, dist, file.mass)
    }
}

impl From<FiniteMMSpace> for SpaceFile {
    fn from(space: FiniteMMSpace) -> Self {
        let n = space.len();
        let dist = (0..n)
            .map(|i| {
                space
                    .row(i)
                    .iter()
                    .map(|&d| {
                        if d.is_infinite() {
                            DistEntry::Token("inf".into())
                        } else {
                            DistEntry::Number(d)
                        }
                    })
                    .collect()
            })
            .collect();
        SpaceFile {
            labels: space.labels,
            dist,
            mass: space.mass,
        }
    }
}
