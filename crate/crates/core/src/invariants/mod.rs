//! Observable diameter, separation distance and the inequalities linking
//! them.

pub mod checks;
pub mod obs_diam;
pub mod profile;
pub mod sep;

pub use checks::{check_phase_lemma, check_sandwich, PhaseLemmaReport, SandwichReport};
pub use obs_diam::{
    obs_diam_exact, obs_diam_grid, obs_diam_heuristic, obs_diam_heuristic_profile, HeuristicConfig,
    ObsDiamReport, SolverMode,
};
pub use profile::{invariant_profile, InvariantProfile, ModeChoice, ProfileConfig};
pub use sep::{
    sep_exact, sep_threshold, sep_threshold_feasible, separation_distance, SepOptions, SepReport,
    SepRoute, SepWitness,
};
