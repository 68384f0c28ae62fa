use serde::{Deserialize, Serialize};

use crate::space::FiniteMMSpace;

/// Relative slack allowed when checking `|f(x) - f(y)| ≤ d(x, y)` in floating point.
pub const LIPSCHITZ_TOL: f64 = 1e-9;

/// Real values indexed by the points of a space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LipschitzFunction {
    values: Vec<f64>,
}

impl LipschitzFunction {
    pub fn new(values: Vec<f64>) -> Self {
        LipschitzFunction { values }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![0.0; n])
    }

    /// The distance function `x ↦ d(x, p)`.
    pub fn distance_to(space: &FiniteMMSpace, p: usize) -> Self {
        Self::new(space.row(p).to_vec())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Pairs `(i, j)` with `|f(i) - f(j)| > d(i, j)` beyond the tolerance.
    pub fn violations(&self, space: &FiniteMMSpace) -> Vec<(usize, usize)> {
        let n = space.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = space.dist(i, j);
                let gap = (self.values[i] - self.values[j]).abs();
                if gap > d + LIPSCHITZ_TOL * (1.0 + d) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_feasible(&self, space: &FiniteMMSpace) -> bool {
        self.len() == space.len() && self.violations(space).is_empty()
    }
}
