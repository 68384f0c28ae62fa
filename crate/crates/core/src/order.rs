//! Lipschitz order between small finite mm-spaces.
//!
//! `X` dominates `Y` when some 1-Lipschitz map `X → Y` pushes `μ_X` to
//! `μ_Y`. On finite spaces every such map sends each atom to a single point,
//! so the search runs over point maps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::obs_diam::{obs_diam_exact, SolverMode};
use crate::invariants::sep::{sep_exact, SepOptions};
use crate::kappa::KappaGrid;
use crate::space::{AmbientMetric, FiniteMMSpace};
use crate::MASS_TOL;

/// Default bound on `|Y|^|X|`, i.e. `5^8`.
pub const DOMINATION_BUDGET: u64 = 390_625;

const LIPSCHITZ_TOL: f64 = 1e-12;

/// Largest departures of a map from the two witness conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `max (d_Y(f x, f x') - d_X(x, x'))`, clipped at 0.
    pub lipschitz: f64,
    /// `max_y |μ_X(f⁻¹ y) - μ_Y(y)|`.
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationWitness {
    pub map: Vec<usize>,
}

impl DominationWitness {
    pub fn residuals(&self, x: &FiniteMMSpace, y: &FiniteMMSpace) -> Residuals {
        let mut lipschitz = 0.0f64;
        for a in 0..x.len() {
            for b in 0..x.len() {
                lipschitz = lipschitz.max(y.dist(self.map[a], self.map[b]) - x.dist(a, b));
            }
        }
        let mut pushed = vec![0.0; y.len()];
        for (a, &t) in self.map.iter().enumerate() {
            pushed[t] += x.mass(a);
        }
        let mass = pushed
            .iter()
            .zip(y.masses())
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        Residuals { lipschitz, mass }
    }

    pub fn is_valid(&self, x: &FiniteMMSpace, y: &FiniteMMSpace) -> bool {
        if self.map.len() != x.len() || self.map.iter().any(|&t| t >= y.len()) {
            return false;
        }
        let r = self.residuals(x, y);
        r.lipschitz <= LIPSCHITZ_TOL && r.mass <= MASS_TOL
    }

    /// `g ∘ self`, a witness for `Z ≺ X` when `g` witnesses `Z ≺ Y`.
    pub fn compose(&self, g: &DominationWitness) -> DominationWitness {
        DominationWitness {
            map: self.map.iter().map(|&y| g.map[y]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Domination {
    /// `Y ≺ X` with a verified witness.
    Dominates {
        witness: DominationWitness,
        residuals: Residuals,
        nodes: u64,
    },
    /// Exhaustive search found no witness.
    Refuted { nodes: u64 },
}

impl Domination {
    pub fn witness(&self) -> Option<&DominationWitness> {
        match self {
            Domination::Dominates { witness, .. } => Some(witness),
            Domination::Refuted { .. } => None,
        }
    }
}

/// Decides whether `x` dominates `y` by exhaustive search.
pub fn dominates_exact(x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<Domination> {
    dominates_exact_with(x, y, DOMINATION_BUDGET)
}

pub fn dominates_exact_with(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    budget: u64,
) -> Result<Domination> {
    x.require_finite("the domination search")?;
    y.require_finite("the domination search")?;
    let work = (y.len() as u128)
        .checked_pow(x.len() as u32)
        .unwrap_or(u128::MAX);
    if work > budget as u128 {
        return Err(Error::capacity(
            format!("domination search over {}^{} maps", y.len(), x.len()),
            budget,
            "use necessary_conditions for a partial answer",
        ));
    }
    let by_mass = |s: &FiniteMMSpace| {
        let mut v: Vec<usize> = (0..s.len()).collect();
        v.sort_by(|&a, &b| s.mass(b).total_cmp(&s.mass(a)).then(a.cmp(&b)));
        v
    };
    let mut search = Search {
        x,
        y,
        sources: by_mass(x),
        targets: by_mass(y),
        map: vec![usize::MAX; x.len()],
        room: y.masses().to_vec(),
        nodes: 0,
    };
    if search.descend(0) {
        let witness = DominationWitness { map: search.map };
        let residuals = witness.residuals(x, y);
        Ok(Domination::Dominates {
            witness,
            residuals,
            nodes: search.nodes,
        })
    } else {
        Ok(Domination::Refuted {
            nodes: search.nodes,
        })
    }
}

struct Search<'a> {
    x: &'a FiniteMMSpace,
    y: &'a FiniteMMSpace,
    sources: Vec<usize>,
    targets: Vec<usize>,
    map: Vec<usize>,
    /// Mass each target still has to receive.
    room: Vec<f64>,
    nodes: u64,
}

impl Search<'_> {
    fn descend(&mut self, k: usize) -> bool {
        self.nodes += 1;
        if k == self.sources.len() {
            return self.room.iter().all(|r| r.abs() <= MASS_TOL);
        }
        let a = self.sources[k];
        let m = self.x.mass(a);
        for ti in 0..self.targets.len() {
            let t = self.targets[ti];
            if self.room[t] < m - MASS_TOL {
                continue;
            }
            let lipschitz = self.sources[..k]
                .iter()
                .all(|&b| self.y.dist(t, self.map[b]) <= self.x.dist(a, b) + LIPSCHITZ_TOL);
            if !lipschitz {
                continue;
            }
            self.map[a] = t;
            self.room[t] -= m;
            if self.feasible_rest(k + 1) && self.descend(k + 1) {
                return true;
            }
            self.room[t] += m;
            self.map[a] = usize::MAX;
        }
        false
    }

    /// Every target still short of mass needs an unplaced source that fits.
    fn feasible_rest(&self, k: usize) -> bool {
        let smallest = self.sources[k..]
            .iter()
            .map(|&a| self.x.mass(a))
            .fold(f64::INFINITY, f64::min);
        self.room
            .iter()
            .all(|&r| r <= MASS_TOL || (k < self.sources.len() && r >= smallest - MASS_TOL))
    }
}

/// A monotonicity violation that rules out `Y ≺ X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityViolation {
    pub quantity: String,
    pub kappas: Vec<f64>,
    /// Value on the would-be dominating space `X`.
    pub dominating: f64,
    /// Value on the would-be dominated space `Y`.
    pub dominated: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessaryReport {
    pub violations: Vec<MonotonicityViolation>,
    pub tolerance: f64,
}

impl NecessaryReport {
    /// True when a violation certifies that `X` does not dominate `Y`.
    pub fn refutes(&self) -> bool {
        !self.violations.is_empty()
    }
}

/// Compares `ObsDiam(·; -κ)` and `Sep(·; κ, κ)` of `x` and `y` over the
/// grid. `Y ≺ X` forces both to be no larger on `Y`.
pub fn necessary_conditions(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    grid: &KappaGrid,
) -> Result<NecessaryReport> {
    let tolerance = SolverMode::Exact.tolerance();
    let mut violations = Vec::new();
    for &k in grid.values() {
        let ox = obs_diam_exact(x, k)?.value;
        let oy = obs_diam_exact(y, k)?.value;
        if oy > ox + tolerance {
            violations.push(MonotonicityViolation {
                quantity: "obs_diam".into(),
                kappas: vec![k],
                dominating: ox,
                dominated: oy,
            });
        }
        let sx = sep_exact(x, &[k, k], &SepOptions::default())?.value;
        let sy = sep_exact(y, &[k, k], &SepOptions::default())?.value;
        if sy > sx + tolerance {
            violations.push(MonotonicityViolation {
                quantity: "sep".into(),
                kappas: vec![k, k],
                dominating: sx,
                dominated: sy,
            });
        }
    }
    Ok(NecessaryReport {
        violations,
        tolerance,
    })
}

/// Image of `x` under `map` into `target`: the points hit, with pushed
/// masses and the target distances.
pub fn pushforward_space(
    x: &FiniteMMSpace,
    map: &[usize],
    target: &AmbientMetric,
) -> Result<FiniteMMSpace> {
    if map.len() != x.len() {
        return Err(Error::invalid(format!(
            "map has {} entries for {} points",
            map.len(),
            x.len()
        )));
    }
    if let Some(&t) = map.iter().find(|&&t| t >= target.len()) {
        return Err(Error::invalid(format!("target point {t} does not exist")));
    }
    for a in 0..x.len() {
        for b in a + 1..x.len() {
            if target.dist(map[a], map[b]) > x.dist(a, b) + LIPSCHITZ_TOL {
                return Err(Error::invalid(format!(
                    "map is not 1-Lipschitz on the pair ({a}, {b})"
                )));
            }
        }
    }
    let mut hit: Vec<usize> = map.to_vec();
    hit.sort_unstable();
    hit.dedup();
    let mut mass = vec![0.0; hit.len()];
    for (a, t) in map.iter().enumerate() {
        mass[hit.binary_search(t).unwrap()] += x.mass(a);
    }
    let labels = hit.iter().map(|t| t.to_string()).collect();
    let dist = hit
        .iter()
        .map(|&s| hit.iter().map(|&t| target.dist(s, t)).collect())
        .collect();
    FiniteMMSpace::new(labels, dist, mass)
}
