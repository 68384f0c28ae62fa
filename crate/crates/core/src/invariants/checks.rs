//! Numerical checks of the inequalities between `ObsDiam` and `Sep`.

use serde::{Deserialize, Serialize};

use super::obs_diam::{obs_diam_exact, SolverMode};
use super::sep::{sep_exact, SepOptions};
use crate::error::{Error, Result};
use crate::space::FiniteMMSpace;

/// `ObsDiam(X; -2κ) ≤ Sep(X; κ, κ) ≤ ObsDiam(X; -κ')` evaluated with the
/// exact solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub kappa: f64,
    pub kappa_prime: f64,
    pub obs_diam_double: f64,
    pub sep: f64,
    pub obs_diam_prime: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    pub tolerance: f64,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

pub fn check_sandwich(
    space: &FiniteMMSpace,
    kappa: f64,
    kappa_prime: f64,
) -> Result<SandwichReport> {
    if !(kappa_prime > 0.0 && kappa_prime < kappa) {
        return Err(Error::invalid(format!(
            "need 0 < κ' < κ, got κ = {kappa}, κ' = {kappa_prime}"
        )));
    }
    let tolerance = SolverMode::Exact.tolerance();
    let obs_diam_double = obs_diam_exact(space, 2.0 * kappa)?.value;
    let sep = sep_exact(space, &[kappa, kappa], &SepOptions::default())?.value;
    let obs_diam_prime = obs_diam_exact(space, kappa_prime)?.value;
    Ok(SandwichReport {
        kappa,
        kappa_prime,
        obs_diam_double,
        sep,
        obs_diam_prime,
        lower_holds: obs_diam_double <= sep + tolerance,
        upper_holds: sep <= obs_diam_prime + tolerance,
        tolerance,
    })
}

/// `Sep(X; κ_0, ..., κ_N) ≥ ObsDiam(X; -κ)` under the mass hypothesis
/// `1 - (1 - Σκ_i)/N ≤ κ < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseLemmaReport {
    pub kappas: Vec<f64>,
    pub kappa: f64,
    pub sep: f64,
    pub obs_diam: f64,
    pub holds: bool,
    pub tolerance: f64,
}

pub fn check_phase_lemma(
    space: &FiniteMMSpace,
    kappas: &[f64],
    kappa: f64,
) -> Result<PhaseLemmaReport> {
    if kappas.len() < 2 {
        return Err(Error::invalid("need at least two mass levels"));
    }
    let n = (kappas.len() - 1) as f64;
    let bound = 1.0 - (1.0 - kappas.iter().sum::<f64>()) / n;
    if !(bound <= kappa + 1e-12 && kappa < 1.0) {
        return Err(Error::Precondition(format!(
            "need {bound} ≤ κ < 1, got κ = {kappa}"
        )));
    }
    let tolerance = SolverMode::Exact.tolerance();
    let sep = sep_exact(space, kappas, &SepOptions::default())?.value;
    let obs_diam = obs_diam_exact(space, kappa)?.value;
    Ok(PhaseLemmaReport {
        kappas: kappas.to_vec(),
        kappa,
        sep,
        obs_diam,
        holds: sep + tolerance >= obs_diam,
        tolerance,
    })
}
