//! Finite atomic measures on the real line and their partial diameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lipschitz::LipschitzFunction;
use crate::space::{check_alpha, FiniteMMSpace};
use crate::MASS_TOL;

/// Atoms `(position, mass)` sorted by strictly increasing position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MeasureFile", into = "MeasureFile")]
pub struct RealMeasure {
    positions: Vec<f64>,
    masses: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct MeasureFile {
    atoms: Vec<(f64, f64)>,
}

impl TryFrom<MeasureFile> for RealMeasure {
    type Error = Error;
    fn try_from(file: MeasureFile) -> Result<Self> {
        RealMeasure::new(file.atoms)
    }
}

impl From<RealMeasure> for MeasureFile {
    fn from(m: RealMeasure) -> Self {
        MeasureFile {
            atoms: m.atoms().collect(),
        }
    }
}

/// A minimal window `[positions[left], positions[right]]` of a partial diameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub left: usize,
    pub right: usize,
    pub length: f64,
}

impl RealMeasure {
    /// Sorts atoms and merges equal positions.
    pub fn new(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::invalid("a measure needs at least one atom"));
        }
        for &(x, m) in &atoms {
            if !x.is_finite() {
                return Err(Error::invalid(format!("atom position {x} is not finite")));
            }
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::invalid(format!("atom mass {m} must be positive")));
            }
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut positions: Vec<f64> = Vec::with_capacity(atoms.len());
        let mut masses: Vec<f64> = Vec::with_capacity(atoms.len());
        for (x, m) in atoms {
            match positions.last() {
                Some(&last) if last == x => *masses.last_mut().unwrap() += m,
                _ => {
                    positions.push(x);
                    masses.push(m);
                }
            }
        }
        Ok(RealMeasure { positions, masses })
    }

    pub fn dirac(x: f64) -> Self {
        RealMeasure {
            positions: vec![x],
            masses: vec![1.0],
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn atoms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.positions
            .iter()
            .copied()
            .zip(self.masses.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn shifted(&self, by: f64) -> Self {
        RealMeasure {
            positions: self.positions.iter().map(|x| x + by).collect(),
            masses: self.masses.clone(),
        }
    }

    /// `diam(m; α)`: shortest closed interval carrying mass at least `α`.
    pub fn partial_diameter(&self, alpha: f64) -> Result<f64> {
        Ok(self.partial_diameter_window(alpha)?.length)
    }

    /// Sliding window over the sorted atoms; ties resolve to the leftmost
    /// minimal window.
    pub fn partial_diameter_window(&self, alpha: f64) -> Result<Window> {
        check_alpha(alpha)?;
        Ok(window_scan(&self.positions, &self.masses, alpha - MASS_TOL)
            .expect("a probability measure always carries mass alpha <= 1"))
    }
}

/// Minimal window of sorted `positions` whose mass reaches `target`.
///
/// Returns `None` when even the whole support is too light.
pub(crate) fn window_scan(positions: &[f64], masses: &[f64], target: f64) -> Option<Window> {
    let n = positions.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for &m in masses {
        prefix.push(prefix.last().unwrap() + m);
    }
    let mut best: Option<Window> = None;
    let mut right = 0;
    for left in 0..n {
        if right < left {
            right = left;
        }
        while right < n && prefix[right + 1] - prefix[left] < target {
            right += 1;
        }
        if right == n {
            break;
        }
        let length = positions[right] - positions[left];
        if best.is_none_or(|b| length < b.length) {
            best = Some(Window {
                left,
                right,
                length,
            });
        }
    }
    best
}

/// Partial diameter of the pushforward of `masses` under the values `f`.
///
/// Allocation-light path used by the observable-diameter solvers.
pub(crate) fn pushforward_partial_diameter(values: &[f64], masses: &[f64], alpha: f64) -> f64 {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut positions = Vec::with_capacity(idx.len());
    let mut merged = Vec::with_capacity(idx.len());
    for &i in &idx {
        match positions.last() {
            Some(&last) if last == values[i] => *merged.last_mut().unwrap() += masses[i],
            _ => {
                positions.push(values[i]);
                merged.push(masses[i]);
            }
        }
    }
    window_scan(&positions, &merged, alpha - MASS_TOL).map_or(0.0, |w| w.length)
}

/// The measure `f_*μ_X` on the line.
pub fn pushforward_to_line(space: &FiniteMMSpace, f: &LipschitzFunction) -> Result<RealMeasure> {
    if f.len() != space.len() {
        return Err(Error::invalid(format!(
            "function has {} values for a space of {} points",
            f.len(),
            space.len()
        )));
    }
    RealMeasure::new(
        f.values()
            .iter()
            .copied()
            .zip(space.masses().iter().copied())
            .collect(),
    )
}
