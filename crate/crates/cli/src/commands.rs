use std::path::Path;
use std::process::ExitCode;

use anyhow::Result;
use serde::Serialize;

use mminv::asymptotics::{analyze_family, FamilyConfig, FamilyReport, CSV_HEADER};
use mminv::invariants::{invariant_profile, InvariantProfile, ModeChoice, ProfileConfig};
use mminv::metrics::{box_upper, dconc_lower_estimate, prokhorov, BoxConfig, BoxReport, Estimate};
use mminv::order::{
    dominates_exact_with, necessary_conditions, Domination, NecessaryReport, DOMINATION_BUDGET,
};
use mminv::space::AmbientMetric;
use mminv::{Error, FiniteMMSpace, KappaGrid, ValidationReport};

use crate::config::{read_structured, usage, Format, RunConfig};

const DCONC_DIMENSION: usize = 1;
const DCONC_SAMPLES: usize = 32;

fn load_space(path: &Path) -> Result<FiniteMMSpace> {
    read_structured(path)
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn json_only(run: &RunConfig, command: &str) -> Result<()> {
    if run.format == Format::Csv {
        return Err(usage(format!("{command} only writes JSON")));
    }
    Ok(())
}

#[derive(Serialize)]
struct ValidateOutput<'a> {
    command: &'static str,
    input: String,
    valid: bool,
    points: usize,
    #[serde(flatten)]
    report: &'a ValidationReport,
}

pub fn validate(path: &Path, run: &RunConfig) -> Result<ExitCode> {
    json_only(run, "validate")?;
    let space = load_space(path)?;
    let report = space.validate();
    let out = ValidateOutput {
        command: "validate",
        input: path.display().to_string(),
        valid: report.is_valid(),
        points: space.len(),
        report: &report,
    };
    run.emit(&to_json(&out)?)?;
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    Ok(if report.is_valid() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

/// Loads a space and rejects it with exit status 1 when an axiom fails.
fn load_valid(path: &Path) -> Result<FiniteMMSpace> {
    let space = load_space(path)?;
    let report = space.validate();
    if let Some(v) = report.violations.first() {
        anyhow::bail!("{} is not a valid mm-space: {v}", path.display());
    }
    Ok(space)
}

fn profile_config(run: &RunConfig) -> ProfileConfig {
    let mut config = ProfileConfig {
        kappas: run.grid.clone().unwrap_or_default(),
        mode: run.mode.unwrap_or(ModeChoice::Auto),
        ..ProfileConfig::default()
    };
    config.heuristic.seed = run.seed.unwrap_or(0);
    if let Some(b) = run.budget {
        config.sep.budget = b;
    }
    config
}

#[derive(Serialize)]
struct InvariantsOutput<'a> {
    command: &'static str,
    input: String,
    seed: u64,
    config: &'a ProfileConfig,
    points: usize,
    profile: InvariantProfile,
}

pub fn invariants(path: &Path, run: &RunConfig) -> Result<ExitCode> {
    let space = load_valid(path)?;
    let config = profile_config(run);
    let profile = invariant_profile(&space, &config);
    for e in &profile.obs_diam {
        if let Some(err) = &e.error {
            eprintln!("warning: ObsDiam at κ = {}: {err}", e.kappa);
        }
    }
    for e in &profile.sep {
        if let Some(err) = &e.error {
            eprintln!("warning: Sep at {:?}: {err}", e.kappas);
        }
    }
    let text = match run.format {
        Format::Json => to_json(&InvariantsOutput {
            command: "invariants",
            input: path.display().to_string(),
            seed: config.heuristic.seed,
            config: &config,
            points: space.len(),
            profile,
        })?,
        Format::Csv => {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let cell = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
            let mut out = format!("{CSV_HEADER}\n");
            for e in &profile.obs_diam {
                out.push_str(&format!(
                    "{name},{},{},{},{},{}\n",
                    space.len(),
                    e.kappa,
                    cell(e.value),
                    cell(profile.sep_symmetric(e.kappa)),
                    profile.mode.name()
                ));
            }
            out
        }
    };
    run.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Caps {
    domination_budget: u64,
    box_refinement_cap: u64,
    box_exhaustive_max: usize,
    dconc_dimension: usize,
    dconc_samples: usize,
}

#[derive(Serialize)]
struct DominationEntry {
    /// `Some(false)` also when only the necessary conditions refute it.
    dominates: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<Domination>,
    #[serde(skip_serializing_if = "Option::is_none")]
    necessary: Option<NecessaryReport>,
}

#[derive(Serialize)]
struct Skipped {
    section: String,
    reason: String,
}

#[derive(Serialize)]
struct CompareOutput {
    command: &'static str,
    inputs: [String; 2],
    seed: u64,
    caps: Caps,
    /// Present when both spaces share one ambient point set.
    prokhorov: Option<f64>,
    box_upper: Option<BoxReport>,
    x_dominates_y: DominationEntry,
    y_dominates_x: DominationEntry,
    dconc_lower: Option<Estimate>,
    skipped: Vec<Skipped>,
}

fn same_ambient(x: &FiniteMMSpace, y: &FiniteMMSpace) -> bool {
    x.len() == y.len() && x.labels() == y.labels() && (0..x.len()).all(|i| x.row(i) == y.row(i))
}

fn domination(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    budget: u64,
    section: &str,
    skipped: &mut Vec<Skipped>,
) -> DominationEntry {
    match dominates_exact_with(x, y, budget) {
        Ok(d) => DominationEntry {
            dominates: Some(d.witness().is_some()),
            exact: Some(d),
            necessary: None,
        },
        Err(e) => {
            skipped.push(Skipped {
                section: section.into(),
                reason: e.to_string(),
            });
            match necessary_conditions(x, y, &KappaGrid::default()) {
                Ok(n) => DominationEntry {
                    dominates: n.refutes().then_some(false),
                    exact: None,
                    necessary: Some(n),
                },
                Err(e) => {
                    skipped.push(Skipped {
                        section: format!("{section}.necessary"),
                        reason: e.to_string(),
                    });
                    DominationEntry {
                        dominates: None,
                        exact: None,
                        necessary: None,
                    }
                }
            }
        }
    }
}

fn keep<T>(section: &str, r: Result<T, Error>, skipped: &mut Vec<Skipped>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            skipped.push(Skipped {
                section: section.into(),
                reason: e.to_string(),
            });
            None
        }
    }
}

pub fn compare(xp: &Path, yp: &Path, run: &RunConfig) -> Result<ExitCode> {
    json_only(run, "compare")?;
    let x = load_valid(xp)?;
    let y = load_valid(yp)?;
    let seed = run.seed.unwrap_or(0);
    let budget = run.budget.unwrap_or(DOMINATION_BUDGET);
    let box_config = BoxConfig {
        seed,
        ..BoxConfig::default()
    };
    let mut skipped = Vec::new();

    let prokhorov = if same_ambient(&x, &y) {
        let r = AmbientMetric::of_space(&x).and_then(|a| prokhorov(&a, x.masses(), y.masses()));
        keep("prokhorov", r, &mut skipped)
    } else {
        skipped.push(Skipped {
            section: "prokhorov".into(),
            reason: "the spaces do not share an ambient point set".into(),
        });
        None
    };
    let box_report = keep("box_upper", box_upper(&x, &y, &box_config), &mut skipped);
    let x_dominates_y = domination(&x, &y, budget, "x_dominates_y", &mut skipped);
    let y_dominates_x = domination(&y, &x, budget, "y_dominates_x", &mut skipped);
    let dconc = keep(
        "dconc_lower",
        dconc_lower_estimate(&x, &y, DCONC_DIMENSION, DCONC_SAMPLES, seed),
        &mut skipped,
    );
    let out = CompareOutput {
        command: "compare",
        inputs: [xp.display().to_string(), yp.display().to_string()],
        seed,
        caps: Caps {
            domination_budget: budget,
            box_refinement_cap: box_config.refinement_cap,
            box_exhaustive_max: box_config.exhaustive_max,
            dconc_dimension: DCONC_DIMENSION,
            dconc_samples: DCONC_SAMPLES,
        },
        prokhorov,
        box_upper: box_report,
        x_dominates_y,
        y_dominates_x,
        dconc_lower: dconc,
        skipped,
    };
    run.emit(&to_json(&out)?)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct FamilyOutput<'a> {
    command: &'static str,
    input: String,
    report: &'a FamilyReport,
}

pub fn family(path: &Path, run: &RunConfig) -> Result<ExitCode> {
    let mut config: FamilyConfig = read_structured(path)?;
    if let Some(g) = &run.grid {
        config.profile.kappas = g.clone();
    }
    if let Some(m) = run.mode {
        config.profile.mode = m;
    }
    if let Some(s) = run.seed {
        config.profile.heuristic.seed = s;
        config.spec.seed = s;
    }
    if let Some(b) = run.budget {
        config.profile.sep.budget = b;
    }
    let report = analyze_family(&config)?;
    let text = match run.format {
        Format::Json => to_json(&FamilyOutput {
            command: "family",
            input: path.display().to_string(),
            report: &report,
        })?,
        Format::Csv => report.csv(),
    };
    run.emit(&text)?;
    for v in &report.verdicts {
        eprintln!("verdict: {}", serde_json::to_string(v)?);
    }
    Ok(ExitCode::SUCCESS)
}
