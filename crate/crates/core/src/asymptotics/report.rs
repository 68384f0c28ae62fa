//! One-call analysis of a family: profiles, every detector and a CSV table.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::family::{generate_family, FamilySpec};
use super::trend::{
    canonical_tuple_family, dissipation_trend, levy_trend, n_levy_classify,
    phase_transition_detect, Delta, DissipationVerdict, FamilyData, LevyVerdict, Member,
    NLevyVerdict, PhaseVerdict,
};
use crate::error::Result;
use crate::invariants::profile::ProfileConfig;
use crate::kappa::KappaGrid;

/// Header of [`FamilyReport::csv`].
pub const CSV_HEADER: &str = "family,n,kappa,obs_diam,sep_symmetric,mode";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DetectorConfig {
    pub levy_threshold: f64,
    /// Largest `N` tried by the `N`-Lévy and dissipation tests.
    pub n_levy_max: usize,
    pub deltas: Vec<Delta>,
    /// Tail-to-first growth factor standing in for `δ = ∞`.
    pub growth: f64,
    pub ratio_cap: f64,
    /// Reference levels of the phase criterion; the first one defines `c_n`.
    pub kappa_refs: Vec<f64>,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        DetectorConfig {
            levy_threshold: 0.05,
            n_levy_max: 3,
            deltas: vec![Delta::Finite(1.0), Delta::Infinity],
            growth: 4.0,
            ratio_cap: 8.0,
            kappa_refs: vec![0.5, 0.25, 0.75],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub spec: FamilySpec,
    #[serde(default)]
    pub profile: ProfileConfig,
    #[serde(default)]
    pub detectors: DetectorConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Levy { threshold: f64 },
    NLevy { n: usize },
    Dissipates { delta: Delta },
    WeaklyDissipates,
    PhaseTransition { c: Vec<(usize, f64)> },
    Inconclusive { test: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub family: String,
    pub config: FamilyConfig,
    /// Grid actually profiled: the configured one plus the reference levels.
    pub kappas: Vec<f64>,
    /// Distinct solver modes used, in index order of first use.
    pub modes: Vec<String>,
    pub members: Vec<Member>,
    pub levy: LevyVerdict,
    pub n_levy: NLevyVerdict,
    pub dissipation: Vec<DissipationVerdict>,
    pub phase: PhaseVerdict,
    /// Positive verdicts, each backed by the detector output above.
    pub verdicts: Vec<Verdict>,
}

fn profile_grid(config: &FamilyConfig) -> Result<KappaGrid> {
    let mut values: Vec<f64> = config.profile.kappas.values().to_vec();
    values.extend(&config.detectors.kappa_refs);
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    KappaGrid::new(values)
}

/// Generates the family, profiles every member and runs every detector.
pub fn analyze_family(config: &FamilyConfig) -> Result<FamilyReport> {
    let members = generate_family(&config.spec)?;
    let grid = profile_grid(config)?;
    let det = &config.detectors;
    let mut tuples: Vec<Vec<f64>> = grid.values().iter().map(|&k| vec![k, k]).collect();
    for t in canonical_tuple_family(det.n_levy_max) {
        if !tuples.contains(&t) {
            tuples.push(t);
        }
    }
    let profile = ProfileConfig {
        kappas: grid.clone(),
        sep_tuples: Some(tuples),
        ..config.profile.clone()
    };
    let name = config.spec.generator.name();
    let data = FamilyData::compute(name, &members, &profile);
    Ok(report_from(config, grid, data))
}

/// Runs the detectors on already computed profiles.
pub fn report_from(config: &FamilyConfig, grid: KappaGrid, data: FamilyData) -> FamilyReport {
    let det = &config.detectors;
    let user_kappas = config.profile.kappas.values();
    let levy = levy_trend(&data, user_kappas, det.levy_threshold);
    let n_levy = n_levy_classify(&data, det.n_levy_max, det.levy_threshold);
    let dissipation: Vec<DissipationVerdict> = det
        .deltas
        .iter()
        .map(|&d| dissipation_trend(&data, det.n_levy_max, d, det.growth))
        .collect();
    let phase = phase_transition_detect(&data, grid.values(), &det.kappa_refs, det.ratio_cap);

    let mut verdicts = Vec::new();
    let inconclusive = |test: &str| Verdict::Inconclusive { test: test.into() };
    if levy.inconclusive {
        verdicts.push(inconclusive("levy"));
    } else if levy.levy {
        verdicts.push(Verdict::Levy {
            threshold: det.levy_threshold,
        });
    }
    if let Some(n) = n_levy.n {
        verdicts.push(Verdict::NLevy { n });
    } else if n_levy.inconclusive {
        verdicts.push(inconclusive("n_levy"));
    }
    for d in &dissipation {
        if d.inconclusive {
            verdicts.push(inconclusive("dissipation"));
            break;
        }
        if d.dissipates {
            verdicts.push(Verdict::Dissipates { delta: d.delta });
        }
    }
    if dissipation.first().is_some_and(|d| d.weakly_dissipates) {
        verdicts.push(Verdict::WeaklyDissipates);
    }
    if phase.positive {
        verdicts.push(Verdict::PhaseTransition { c: phase.c.clone() });
    } else if !phase.agreement {
        verdicts.push(inconclusive("phase_transition"));
    }

    let mut modes: Vec<String> = Vec::new();
    for m in &data.members {
        let name = m.profile.mode.name().to_string();
        if !modes.contains(&name) {
            modes.push(name);
        }
    }
    FamilyReport {
        family: data.family.clone(),
        config: config.clone(),
        kappas: grid.values().to_vec(),
        modes,
        members: data.members,
        levy,
        n_levy,
        dissipation,
        phase,
        verdicts,
    }
}

fn cell(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl FamilyReport {
    /// One row per `(n, κ)`; failed entries leave their cell empty.
    pub fn csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for m in &self.members {
            for e in &m.profile.obs_diam {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    self.family,
                    m.n,
                    e.kappa,
                    cell(e.value),
                    cell(m.profile.sep_symmetric(e.kappa)),
                    m.profile.mode.name()
                );
            }
        }
        out
    }

    pub fn data(&self) -> FamilyData {
        FamilyData {
            family: self.family.clone(),
            members: self.members.clone(),
        }
    }
}
