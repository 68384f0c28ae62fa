//! Desk-scale checks of the limit formulas
//! `ObsDiam(P; -κ) = lim_{ε→0} lim_n ObsDiam(X_n; -(κ+ε))` and
//! `Sep(P; κ⃗) = lim_{ε→0} lim_n Sep(X_n; κ⃗ - ε)`.
//!
//! The inner limit is read off the tail of the family, the outer one is a
//! linear extrapolation from the two smallest `ε`. Both are calibration
//! choices and every report says so.

use serde::{Deserialize, Serialize};

use super::trend::{canonical_tuple_family, n_levy_classify, FamilyData, NLevyVerdict};
use crate::error::{Error, Result};
use crate::invariants::profile::{obs_diam_profile, resolve_mode, ProfileConfig};
use crate::invariants::sep::separation_distance;
use crate::space::FiniteMMSpace;

pub const EXTRAPOLATION_NOTE: &str =
    "ε → 0 is a linear extrapolation from the two smallest ε; the tail is the last quartile of indices";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LimitConfig {
    pub profile: ProfileConfig,
    pub eps: Vec<f64>,
    pub tolerance: f64,
}

impl Default for LimitConfig {
    fn default() -> Self {
        LimitConfig {
            profile: ProfileConfig::default(),
            eps: vec![0.01, 0.02],
            tolerance: 0.05,
        }
    }
}

/// Invariant values of the limit object.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LimitTarget {
    pub obs_diam: Vec<(f64, f64)>,
    pub sep: Vec<(Vec<f64>, f64)>,
}

impl LimitTarget {
    /// Target given by a closed-form observable-diameter profile.
    pub fn from_fn(kappas: &[f64], f: impl Fn(f64) -> f64) -> Self {
        LimitTarget {
            obs_diam: kappas.iter().map(|&k| (k, f(k))).collect(),
            sep: Vec::new(),
        }
    }

    /// Target given by a finite space, computed in the configured mode.
    pub fn of_space(
        space: &FiniteMMSpace,
        kappas: &[f64],
        tuples: &[Vec<f64>],
        config: &ProfileConfig,
    ) -> Result<Self> {
        let mode = resolve_mode(space, config.mode, config.exact_cap);
        let obs_diam = kappas
            .iter()
            .zip(obs_diam_profile(space, kappas, mode, config))
            .map(|(&k, r)| r.map(|r| (k, r.value)))
            .collect::<Result<_>>()?;
        let sep = tuples
            .iter()
            .map(|t| separation_distance(space, t, &config.sep).map(|r| (t.clone(), r.value)))
            .collect::<Result<_>>()?;
        Ok(LimitTarget { obs_diam, sep })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsRow {
    pub eps: f64,
    /// Levels the family was evaluated at.
    pub shifted: Vec<f64>,
    pub values: Vec<Option<f64>>,
    pub tail_inf: f64,
    pub tail_sup: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    /// `obs_diam` or `sep`.
    pub quantity: String,
    pub kappas: Vec<f64>,
    pub target: f64,
    pub rows: Vec<EpsRow>,
    pub extrapolated_inf: f64,
    pub extrapolated_sup: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub indices: Vec<usize>,
    pub rows: Vec<LimitRow>,
    /// `(quantity, κ⃗)` pairs skipped because a shifted level left `(0, 1)`.
    pub skipped: Vec<(String, Vec<f64>)>,
    pub tolerance: f64,
    pub agrees: bool,
    pub note: String,
}

fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

fn tail(values: &[Option<f64>]) -> (f64, f64) {
    let q = values.len().div_ceil(4).max(1);
    let tail = &values[values.len().saturating_sub(q)..];
    if tail.iter().any(Option::is_none) || tail.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let t = tail.iter().map(|v| v.unwrap());
    (
        t.clone().fold(f64::INFINITY, f64::min),
        t.fold(f64::NEG_INFINITY, f64::max),
    )
}

/// Value at `ε = 0` of the line through the two smallest-ε points.
fn extrapolate(points: &[(f64, f64)]) -> f64 {
    match points {
        [] => f64::NAN,
        [(_, v)] => *v,
        [(e1, v1), (e2, v2), ..] => v1 - e1 * (v2 - v1) / (e2 - e1),
    }
}

fn finish(
    quantity: &str,
    kappas: Vec<f64>,
    target: f64,
    rows: Vec<EpsRow>,
    tolerance: f64,
) -> LimitRow {
    let lo: Vec<(f64, f64)> = rows.iter().map(|r| (r.eps, r.tail_inf)).collect();
    let hi: Vec<(f64, f64)> = rows.iter().map(|r| (r.eps, r.tail_sup)).collect();
    let extrapolated_inf = extrapolate(&lo);
    let extrapolated_sup = extrapolate(&hi);
    LimitRow {
        quantity: quantity.into(),
        kappas,
        target,
        rows,
        extrapolated_inf,
        extrapolated_sup,
        agrees: (extrapolated_inf - target).abs() <= tolerance
            && (extrapolated_sup - target).abs() <= tolerance,
    }
}

/// Compares the tail of the family against `target` at every target level.
pub fn limit_formula_check(
    members: &[(usize, FiniteMMSpace)],
    target: &LimitTarget,
    config: &LimitConfig,
) -> LimitReport {
    let mut eps = config.eps.clone();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    let mut skipped = Vec::new();

    // every shifted ObsDiam level in one pass per member
    let mut levels: Vec<f64> = Vec::new();
    for &(k, _) in &target.obs_diam {
        for &e in &eps {
            if k + e < 1.0 {
                levels.push(k + e);
            }
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let obs: Vec<Vec<Option<f64>>> = par_map(members, |(_, x)| {
        let mode = resolve_mode(x, config.profile.mode, config.profile.exact_cap);
        obs_diam_profile(x, &levels, mode, &config.profile)
            .into_iter()
            .map(|r| r.ok().map(|r| r.value))
            .collect()
    });
    let level_of = |k: f64| levels.iter().position(|&l| (l - k).abs() < 1e-12);

    let mut rows = Vec::new();
    for &(k, t) in &target.obs_diam {
        if eps.iter().any(|e| k + e >= 1.0) {
            skipped.push(("obs_diam".to_string(), vec![k]));
            continue;
        }
        let eps_rows = eps
            .iter()
            .map(|&e| {
                let j = level_of(k + e).unwrap();
                let values: Vec<Option<f64>> = obs.iter().map(|v| v[j]).collect();
                let (tail_inf, tail_sup) = tail(&values);
                EpsRow {
                    eps: e,
                    shifted: vec![k + e],
                    values,
                    tail_inf,
                    tail_sup,
                }
            })
            .collect();
        rows.push(finish("obs_diam", vec![k], t, eps_rows, config.tolerance));
    }

    for (ks, t) in &target.sep {
        if eps.iter().any(|e| ks.iter().any(|k| k - e <= 0.0)) {
            skipped.push(("sep".to_string(), ks.clone()));
            continue;
        }
        let eps_rows = eps
            .iter()
            .map(|&e| {
                let shifted: Vec<f64> = ks.iter().map(|k| k - e).collect();
                let values: Vec<Option<f64>> = par_map(members, |(_, x)| {
                    separation_distance(x, &shifted, &config.profile.sep)
                        .ok()
                        .map(|r| r.value)
                });
                let (tail_inf, tail_sup) = tail(&values);
                EpsRow {
                    eps: e,
                    shifted,
                    values,
                    tail_inf,
                    tail_sup,
                }
            })
            .collect();
        rows.push(finish("sep", ks.clone(), *t, eps_rows, config.tolerance));
    }

    LimitReport {
        indices: members.iter().map(|(n, _)| *n).collect(),
        agrees: !rows.is_empty() && rows.iter().all(|r| r.agrees),
        rows,
        skipped,
        tolerance: config.tolerance,
        note: EXTRAPOLATION_NOTE.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NLevyConsistency {
    pub n: usize,
    pub classification: NLevyVerdict,
    /// The family classified as `N'`-Lévy for some `N' ≤ N`.
    pub classified: bool,
    /// One limit check per truncation level `D`.
    pub truncations: Vec<(f64, LimitReport)>,
    pub consistent: bool,
}

/// Checks that the family is `N`-Lévy and that its truncations converge to
/// those of `candidate`, a space with at most `N` points.
pub fn n_levy_limit_consistency(
    members: &[(usize, FiniteMMSpace)],
    candidate: &FiniteMMSpace,
    n: usize,
    truncations: &[f64],
    threshold: f64,
    config: &LimitConfig,
) -> Result<NLevyConsistency> {
    if candidate.len() > n {
        return Err(Error::Precondition(format!(
            "candidate has {} points, more than N = {n}",
            candidate.len()
        )));
    }
    let n_max = n.max(1) + 1;
    let tuples = canonical_tuple_family(n_max);
    let profile = ProfileConfig {
        sep_tuples: Some(tuples.clone()),
        ..config.profile.clone()
    };
    let data = FamilyData::compute("family", members, &profile);
    let classification = n_levy_classify(&data, n_max, threshold);
    let classified = classification.n.is_some_and(|k| k <= n);

    let kappas = config.profile.kappas.values();
    let mut reports = Vec::new();
    for &d in truncations {
        let truncated: Vec<(usize, FiniteMMSpace)> = members
            .iter()
            .map(|(i, x)| x.truncate(d).map(|t| (*i, t)))
            .collect::<Result<_>>()?;
        let target =
            LimitTarget::of_space(&candidate.truncate(d)?, kappas, &tuples, &config.profile)?;
        reports.push((d, limit_formula_check(&truncated, &target, config)));
    }
    let consistent = classified && reports.iter().all(|(_, r)| r.agrees);
    Ok(NLevyConsistency {
        n,
        classification,
        classified,
        truncations: reports,
        consistent,
    })
}
