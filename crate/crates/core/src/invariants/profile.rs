//! Observable-diameter and separation profiles over a grid of `κ`.

use serde::{Deserialize, Serialize};

use super::obs_diam::{
    obs_diam_exact_capped, obs_diam_grid_with, obs_diam_heuristic_profile, GridOptions,
    HeuristicConfig, ObsDiamReport, SolverMode, EXACT_CAP, GRID_DIVISIONS,
};
use super::sep::{separation_distance, SepOptions, SepRoute};
use crate::error::Result;
use crate::kappa::KappaGrid;
use crate::space::FiniteMMSpace;

/// Requested observable-diameter solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeChoice {
    Exact,
    /// Grid step `Dmax / divisions`.
    Grid {
        divisions: u32,
    },
    Heuristic,
    /// Exact up to the exact cap, heuristic beyond.
    Auto,
}

impl std::str::FromStr for ModeChoice {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ModeChoice::Exact),
            "grid" => Ok(ModeChoice::Grid {
                divisions: GRID_DIVISIONS,
            }),
            "heuristic" => Ok(ModeChoice::Heuristic),
            "auto" => Ok(ModeChoice::Auto),
            other => Err(crate::Error::invalid(format!(
                "unknown solver mode {other:?} (expected exact, grid, heuristic or auto)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProfileConfig {
    pub kappas: KappaGrid,
    pub mode: ModeChoice,
    pub exact_cap: usize,
    pub heuristic: HeuristicConfig,
    pub sep: SepOptions,
    /// Mass tuples for `Sep`; `None` means `(κ, κ)` for every grid value.
    pub sep_tuples: Option<Vec<Vec<f64>>>,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            kappas: KappaGrid::default(),
            mode: ModeChoice::Auto,
            exact_cap: EXACT_CAP,
            heuristic: HeuristicConfig::default(),
            sep: SepOptions::default(),
            sep_tuples: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObsDiamEntry {
    pub kappa: f64,
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SepEntry {
    pub kappas: Vec<f64>,
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub route: Option<SepRoute>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

/// Profile of one space. Failed entries carry the error instead of a value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub mode: SolverMode,
    pub seed: Option<u64>,
    pub obs_diam: Vec<ObsDiamEntry>,
    pub sep: Vec<SepEntry>,
}

impl InvariantProfile {
    pub fn obs_diam_at(&self, kappa: f64) -> Option<f64> {
        self.obs_diam
            .iter()
            .find(|e| (e.kappa - kappa).abs() < 1e-12)
            .and_then(|e| e.value)
    }

    /// `Sep(X; κ, κ)` when that tuple was evaluated.
    pub fn sep_symmetric(&self, kappa: f64) -> Option<f64> {
        self.sep
            .iter()
            .find(|e| e.kappas.len() == 2 && e.kappas.iter().all(|k| (k - kappa).abs() < 1e-12))
            .and_then(|e| e.value)
    }
}

/// Solver actually used for a space of `n` points under `choice`.
pub fn resolve_mode(space: &FiniteMMSpace, choice: ModeChoice, exact_cap: usize) -> SolverMode {
    match choice {
        ModeChoice::Exact => SolverMode::Exact,
        ModeChoice::Grid { divisions } => {
            let dmax = space.max_finite_distance();
            let resolution = if dmax > 0.0 {
                dmax / divisions.max(1) as f64
            } else {
                1.0
            };
            SolverMode::Grid { resolution }
        }
        ModeChoice::Heuristic => SolverMode::Heuristic,
        ModeChoice::Auto if space.len() <= exact_cap => SolverMode::Exact,
        ModeChoice::Auto => SolverMode::Heuristic,
    }
}

/// Observable diameters at every `κ` of the grid in one mode.
pub fn obs_diam_profile(
    space: &FiniteMMSpace,
    kappas: &[f64],
    mode: SolverMode,
    config: &ProfileConfig,
) -> Vec<Result<ObsDiamReport>> {
    match mode {
        SolverMode::Exact => kappas
            .iter()
            .map(|&k| obs_diam_exact_capped(space, k, config.exact_cap))
            .collect(),
        SolverMode::Grid { resolution } => {
            let opts = GridOptions {
                cap: config.exact_cap,
                ..GridOptions::default()
            };
            kappas
                .iter()
                .map(|&k| obs_diam_grid_with(space, k, resolution, &opts))
                .collect()
        }
        SolverMode::Heuristic => match obs_diam_heuristic_profile(space, kappas, &config.heuristic)
        {
            Ok(reports) => reports.into_iter().map(Ok).collect(),
            Err(e) => kappas.iter().map(|_| Err(e.clone())).collect(),
        },
    }
}

/// Observable diameter and separation profile of `space`.
pub fn invariant_profile(space: &FiniteMMSpace, config: &ProfileConfig) -> InvariantProfile {
    let mode = resolve_mode(space, config.mode, config.exact_cap);
    let kappas = config.kappas.values();
    let obs_diam = kappas
        .iter()
        .zip(obs_diam_profile(space, kappas, mode, config))
        .map(|(&kappa, r)| match r {
            Ok(r) => ObsDiamEntry {
                kappa,
                value: Some(r.value),
                error: None,
            },
            Err(e) => ObsDiamEntry {
                kappa,
                value: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let tuples = config
        .sep_tuples
        .clone()
        .unwrap_or_else(|| kappas.iter().map(|&k| vec![k, k]).collect());
    let sep = tuples
        .into_iter()
        .map(|ks| match separation_distance(space, &ks, &config.sep) {
            Ok(r) => SepEntry {
                kappas: ks,
                value: Some(r.value),
                route: Some(r.route),
                error: None,
            },
            Err(e) => SepEntry {
                kappas: ks,
                value: None,
                route: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    InvariantProfile {
        mode,
        seed: (mode == SolverMode::Heuristic).then_some(config.heuristic.seed),
        obs_diam,
        sep,
    }
}
