//! Browser bindings for the invariant calculators.
//!
//! Every exported function takes plain numbers or strings and returns a JSON
//! string, so the page needs no generated type glue beyond `wasm-bindgen`.
//! The `*_json` functions hold the logic and are what the tests exercise.

use serde::Serialize;
use serde_json::json;
use statrs::distribution::{ContinuousCDF, Normal};
use wasm_bindgen::prelude::*;

use mminv::asymptotics::{analyze_family, FamilyConfig, FamilySpec, Generator};
use mminv::invariants::ProfileConfig;
use mminv::{KappaGrid, RealMeasure};

/// Largest family index the page may request; the browser runs single-threaded.
pub const MAX_INDEX: usize = 96;
pub const MAX_GAUSSIAN_POINTS: usize = 20_001;

fn parse_grid(kappas: &str) -> Result<KappaGrid, String> {
    if kappas.trim().is_empty() {
        return Ok(KappaGrid::default());
    }
    kappas.parse().map_err(|e: mminv::Error| e.to_string())
}

fn family_config(
    generator: &str,
    n_min: usize,
    n_max: usize,
    step: usize,
    kappas: &str,
) -> Result<FamilyConfig, String> {
    if n_max > MAX_INDEX {
        return Err(format!("n_max is limited to {MAX_INDEX} in the browser"));
    }
    let generator: Generator = generator.parse().map_err(|e: mminv::Error| e.to_string())?;
    let mut spec = FamilySpec::new(generator, n_min, n_max);
    spec.step = step.max(1);
    Ok(FamilyConfig {
        spec,
        profile: ProfileConfig {
            kappas: parse_grid(kappas)?,
            ..ProfileConfig::default()
        },
        detectors: Default::default(),
    })
}

#[derive(Serialize)]
struct ProfileRow {
    n: usize,
    points: usize,
    mode: String,
    obs_diam: Vec<Option<f64>>,
}

/// Observable-diameter curves of a generated family plus the trend verdicts.
pub fn family_profile_json(
    generator: &str,
    n_min: usize,
    n_max: usize,
    step: usize,
    kappas: &str,
) -> Result<String, String> {
    let config = family_config(generator, n_min, n_max, step, kappas)?;
    let report = analyze_family(&config).map_err(|e| e.to_string())?;
    let rows: Vec<ProfileRow> = report
        .members
        .iter()
        .map(|m| ProfileRow {
            n: m.n,
            points: m.points,
            mode: m.profile.mode.name().to_string(),
            obs_diam: report
                .kappas
                .iter()
                .map(|&k| m.profile.obs_diam_at(k))
                .collect(),
        })
        .collect();
    let out = json!({
        "family": report.family,
        "kappas": report.kappas,
        "rows": rows,
        "verdicts": report.verdicts,
    });
    Ok(out.to_string())
}

/// `ObsDiam` of the `m`-point quantile discretization of the standard
/// Gaussian next to the closed form `2 Φ⁻¹(1 - κ/2)`.
///
/// On the line the observable diameter equals the partial diameter, since a
/// 1-Lipschitz image of a subset of ℝ cannot spread mass further.
pub fn gaussian_profile_json(m: usize, kappas: &str) -> Result<String, String> {
    if m == 0 || m > MAX_GAUSSIAN_POINTS {
        return Err(format!("m must lie in 1..={MAX_GAUSSIAN_POINTS}"));
    }
    let grid = parse_grid(kappas)?;
    let normal = Normal::standard();
    let atoms = (0..m)
        .map(|i| {
            (
                normal.inverse_cdf((i as f64 + 0.5) / m as f64),
                1.0 / m as f64,
            )
        })
        .collect();
    let measure = RealMeasure::new(atoms).map_err(|e| e.to_string())?;
    let mut rows = Vec::new();
    for &k in grid.values() {
        let computed = measure
            .partial_diameter(1.0 - k)
            .map_err(|e| e.to_string())?;
        let exact = 2.0 * normal.inverse_cdf(1.0 - k / 2.0);
        rows.push(json!({ "kappa": k, "computed": computed, "closed_form": exact, "error": (computed - exact).abs() }));
    }
    Ok(json!({ "points": m, "rows": rows }).to_string())
}

/// The phase-transition criterion of a family: `r_n`, `c_n = 1/r_n` and the
/// worst ratio per reference level.
pub fn phase_table_json(
    generator: &str,
    n_min: usize,
    n_max: usize,
    step: usize,
) -> Result<String, String> {
    let config = family_config(generator, n_min, n_max, step, "")?;
    let report = analyze_family(&config).map_err(|e| e.to_string())?;
    let indices: Vec<usize> = report.members.iter().map(|m| m.n).collect();
    let runs: Vec<_> = report
        .phase
        .runs
        .iter()
        .map(|run| {
            json!({
                "kappa_ref": run.kappa_ref,
                "from_n": run.from_n,
                "ratio_cap": run.ratio_cap,
                "positive": run.positive,
                "max_ratio": run.max_ratio,
                "worst": run.worst,
                "r": run.r,
            })
        })
        .collect();
    Ok(json!({
        "family": report.family,
        "indices": indices,
        "positive": report.phase.positive,
        "agreement": report.phase.agreement,
        "c": report.phase.c,
        "runs": runs,
    })
    .to_string())
}

fn to_js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn family_profile(
    generator: &str,
    n_min: usize,
    n_max: usize,
    step: usize,
    kappas: &str,
) -> Result<String, JsValue> {
    to_js(family_profile_json(generator, n_min, n_max, step, kappas))
}

#[wasm_bindgen]
pub fn gaussian_profile(m: usize, kappas: &str) -> Result<String, JsValue> {
    to_js(gaussian_profile_json(m, kappas))
}

#[wasm_bindgen]
pub fn phase_table(
    generator: &str,
    n_min: usize,
    n_max: usize,
    step: usize,
) -> Result<String, JsValue> {
    to_js(phase_table_json(generator, n_min, n_max, step))
}
