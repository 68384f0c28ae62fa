use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing sample points in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct KappaGrid {
    values: Vec<f64>,
}

impl KappaGrid {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("kappa grid is empty"));
        }
        if let Some(bad) = values.iter().find(|&&k| !(k > 0.0 && k < 1.0)) {
            return Err(Error::invalid(format!("kappa {bad} is outside (0, 1)")));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("kappa grid must be strictly increasing"));
        }
        Ok(KappaGrid { values })
    }

    /// `{step, 2·step, ...}` below 1, rounded to 12 decimals.
    pub fn uniform(step: f64) -> Result<Self> {
        if !(step > 0.0 && step < 1.0) {
            return Err(Error::invalid(format!(
                "grid step {step} is outside (0, 1)"
            )));
        }
        let values = (1..)
            .map(|i| (i as f64 * step * 1e12).round() / 1e12)
            .take_while(|&k| k < 1.0)
            .collect();
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn position(&self, kappa: f64) -> Option<usize> {
        self.values.iter().position(|&k| (k - kappa).abs() < 1e-12)
    }
}

impl Default for KappaGrid {
    /// `{0.1, 0.2, ..., 0.9}`.
    fn default() -> Self {
        KappaGrid::uniform(0.1).unwrap()
    }
}

impl TryFrom<Vec<f64>> for KappaGrid {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        KappaGrid::new(values)
    }
}

impl From<KappaGrid> for Vec<f64> {
    fn from(g: KappaGrid) -> Self {
        g.values
    }
}

impl FromStr for KappaGrid {
    type Err = Error;

    /// Accepts `0.1,0.25,0.5` or a step form `step:0.1`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(step) = s.strip_prefix("step:") {
            let step = step
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::invalid(format!("bad grid step {step:?}: {e}")))?;
            return KappaGrid::uniform(step);
        }
        let values = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::invalid(format!("bad kappa {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        KappaGrid::new(values)
    }
}
