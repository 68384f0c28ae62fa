//! Trend detectors over computed family profiles.
//!
//! Limits are read off at desk scale: the tail of a sequence is its last
//! quartile of indices, `liminf` becomes the tail minimum and `limsup` the
//! tail maximum. The phase criterion compares ratios over the same tail,
//! since finitely many initial members do not affect it. Every verdict
//! carries the series it was issued on.

use serde::{Deserialize, Serialize};

use crate::invariants::profile::{invariant_profile, InvariantProfile, ProfileConfig};
use crate::space::FiniteMMSpace;

/// Symmetric mass levels used for the `(N+1)`-set separation tests.
pub const CANONICAL_LEVELS: [f64; 3] = [0.1, 0.2, 0.3];

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub n: usize,
    pub points: usize,
    pub profile: InvariantProfile,
}

/// Profiles of the members of one family, in index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyData {
    pub family: String,
    pub members: Vec<Member>,
}

/// `(N+1)`-tuples at the canonical levels with sum below 1.
pub fn canonical_tuples(sets: usize) -> Vec<Vec<f64>> {
    CANONICAL_LEVELS
        .iter()
        .filter(|&&l| l * (sets as f64) < 1.0 - 1e-12)
        .map(|&l| vec![l; sets])
        .collect()
}

/// Canonical tuples for every `N` in `1..=n_max`.
pub fn canonical_tuple_family(n_max: usize) -> Vec<Vec<f64>> {
    (1..=n_max).flat_map(|n| canonical_tuples(n + 1)).collect()
}

fn same(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
}

impl FamilyData {
    /// Computes every profile, in parallel when enabled.
    pub fn compute(
        family: &str,
        members: &[(usize, FiniteMMSpace)],
        config: &ProfileConfig,
    ) -> Self {
        let one = |(n, x): &(usize, FiniteMMSpace)| Member {
            n: *n,
            points: x.len(),
            profile: invariant_profile(x, config),
        };
        #[cfg(feature = "parallel")]
        let members = {
            use rayon::prelude::*;
            members.par_iter().map(one).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let members = members.iter().map(one).collect();
        FamilyData {
            family: family.to_string(),
            members,
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.n).collect()
    }

    pub fn obs_diam_series(&self, kappa: f64) -> Series {
        self.series(vec![kappa], |m| m.profile.obs_diam_at(kappa))
    }

    pub fn sep_series(&self, kappas: &[f64]) -> Series {
        self.series(kappas.to_vec(), |m| {
            m.profile
                .sep
                .iter()
                .find(|e| same(&e.kappas, kappas))
                .and_then(|e| e.value)
        })
    }

    fn series(&self, kappas: Vec<f64>, get: impl Fn(&Member) -> Option<f64>) -> Series {
        let mut s = Series {
            kappas,
            indices: Vec::new(),
            values: Vec::new(),
            missing: Vec::new(),
            tail_min: f64::NAN,
            tail_max: f64::NAN,
            prefix_max: f64::NAN,
            slope: f64::NAN,
        };
        for m in &self.members {
            match get(m) {
                Some(v) => {
                    s.indices.push(m.n);
                    s.values.push(v);
                }
                None => s.missing.push(m.n),
            }
        }
        s.summarize();
        s
    }

    /// ObsDiam grid values present in every profile.
    pub fn kappas(&self) -> Vec<f64> {
        self.members
            .first()
            .map(|m| m.profile.obs_diam.iter().map(|e| e.kappa).collect())
            .unwrap_or_default()
    }
}

/// One invariant along the family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    /// `[κ]` for ObsDiam, the mass tuple for Sep.
    pub kappas: Vec<f64>,
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
    /// Indices whose entry failed or was not computed.
    pub missing: Vec<usize>,
    pub tail_min: f64,
    pub tail_max: f64,
    /// Maximum before the tail; 0 when the tail is the whole series.
    pub prefix_max: f64,
    /// Least-squares slope of the values against `ln n`.
    pub slope: f64,
}

fn quarter(len: usize) -> usize {
    len.div_ceil(4).max(1)
}

impl Series {
    fn summarize(&mut self) {
        let len = self.values.len();
        if len == 0 {
            return;
        }
        let q = quarter(len);
        let tail = &self.values[len - q..];
        self.tail_min = tail.iter().copied().fold(f64::INFINITY, f64::min);
        self.tail_max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        self.prefix_max = self.values[..len - q].iter().copied().fold(0.0, f64::max);
        let xs: Vec<f64> = self.indices.iter().map(|&n| (n as f64).ln()).collect();
        let mx = xs.iter().sum::<f64>() / len as f64;
        let my = self.values.iter().sum::<f64>() / len as f64;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs
            .iter()
            .zip(&self.values)
            .map(|(x, y)| (x - mx) * (y - my))
            .sum();
        self.slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    }

    pub fn is_complete(&self) -> bool {
        self.missing.is_empty() && !self.values.is_empty()
    }

    /// Tail below `threshold` and no larger than anything before it.
    pub fn vanishes(&self, threshold: f64) -> bool {
        self.is_complete() && self.tail_max <= threshold && self.tail_max <= self.prefix_max + TOL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyVerdict {
    pub levy: bool,
    /// Set when entries were missing; the verdict is then not issued.
    pub inconclusive: bool,
    pub threshold: f64,
    pub series: Vec<Series>,
}

/// Lévy iff every ObsDiam series vanishes below `threshold`.
pub fn levy_trend(data: &FamilyData, kappas: &[f64], threshold: f64) -> LevyVerdict {
    let series: Vec<Series> = kappas.iter().map(|&k| data.obs_diam_series(k)).collect();
    let inconclusive = series.iter().any(|s| !s.is_complete());
    LevyVerdict {
        levy: !inconclusive && series.iter().all(|s| s.vanishes(threshold)),
        inconclusive,
        threshold,
        series,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NLevyVerdict {
    /// Smallest `N ≤ n_max` for which the family tests `N`-Lévy.
    pub n: Option<usize>,
    pub inconclusive: bool,
    pub threshold: f64,
    /// Separation series at `N` (or at `n_max` when no `N` passed).
    pub series: Vec<Series>,
    /// Series at `N - 1` with the largest tail minimum.
    pub companion: Option<Series>,
}

pub fn n_levy_classify(data: &FamilyData, n_max: usize, threshold: f64) -> NLevyVerdict {
    let mut last = Vec::new();
    let mut previous: Vec<Series> = Vec::new();
    let mut inconclusive = false;
    for n in 1..=n_max {
        let series: Vec<Series> = canonical_tuples(n + 1)
            .iter()
            .map(|t| data.sep_series(t))
            .collect();
        if series.iter().any(|s| !s.is_complete()) {
            inconclusive = true;
        } else if series.iter().all(|s| s.vanishes(threshold)) {
            let companion = previous
                .into_iter()
                .max_by(|a, b| a.tail_min.total_cmp(&b.tail_min));
            return NLevyVerdict {
                n: Some(n),
                inconclusive,
                threshold,
                series,
                companion,
            };
        }
        previous = series.clone();
        last = series;
    }
    NLevyVerdict {
        n: None,
        inconclusive,
        threshold,
        series: last,
        companion: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Delta {
    Finite(f64),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DissipationVerdict {
    pub delta: Delta,
    /// Every tail minimum reaches `δ`; for `δ = ∞` every tail minimum is at
    /// least `growth` times the first positive value of its series.
    pub dissipates: bool,
    /// Every tail minimum is positive.
    pub weakly_dissipates: bool,
    pub inconclusive: bool,
    pub growth: f64,
    pub series: Vec<Series>,
}

/// Tail minima of `Sep` over every canonical tuple with up to `n_max + 1`
/// sets.
pub fn dissipation_trend(
    data: &FamilyData,
    n_max: usize,
    delta: Delta,
    growth: f64,
) -> DissipationVerdict {
    let series: Vec<Series> = canonical_tuple_family(n_max)
        .iter()
        .map(|t| data.sep_series(t))
        .collect();
    dissipation_from(series, delta, growth)
}

/// As [`dissipation_trend`] over explicit tuples.
pub fn dissipation_trend_for(
    data: &FamilyData,
    tuples: &[Vec<f64>],
    delta: Delta,
    growth: f64,
) -> DissipationVerdict {
    dissipation_from(
        tuples.iter().map(|t| data.sep_series(t)).collect(),
        delta,
        growth,
    )
}

fn dissipation_from(series: Vec<Series>, delta: Delta, growth: f64) -> DissipationVerdict {
    let inconclusive = series.iter().any(|s| !s.is_complete());
    let complete = !inconclusive && !series.is_empty();
    let dissipates = complete
        && series.iter().all(|s| match delta {
            Delta::Finite(d) => s.tail_min >= d - TOL,
            Delta::Infinity => s
                .values
                .iter()
                .find(|&&v| v > 0.0)
                .is_some_and(|&first| s.tail_min >= growth * first),
        });
    DissipationVerdict {
        delta,
        dissipates,
        weakly_dissipates: complete && series.iter().all(|s| s.tail_min > 0.0),
        inconclusive,
        growth,
        series,
    }
}

/// One run of the phase criterion at a fixed reference level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRun {
    pub kappa_ref: f64,
    /// First index entering the comparison.
    pub from_n: usize,
    pub ratio_cap: f64,
    pub positive: bool,
    /// `r_n = ObsDiam(X_n; -κ_ref)`.
    pub r: Vec<Option<f64>>,
    /// Largest `max(v/r_n, r_n/v)` seen.
    pub max_ratio: f64,
    /// `(n, κ)` where the largest ratio occurs.
    pub worst: Option<(usize, f64)>,
    /// `(n, κ)` with a zero observable diameter, over all indices.
    pub zeros: Vec<(usize, f64)>,
    pub missing: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseVerdict {
    pub positive: bool,
    /// All reference levels gave the same verdict.
    pub agreement: bool,
    pub ratio_cap: f64,
    pub runs: Vec<PhaseRun>,
    /// `(n, c_n = 1/r_n)` from the first reference level, on success, for
    /// every `n` with `r_n > 0`.
    pub c: Vec<(usize, f64)>,
}

fn phase_run(data: &FamilyData, kappas: &[f64], kappa_ref: f64, ratio_cap: f64) -> PhaseRun {
    let start = data.members.len() - quarter(data.members.len());
    let mut run = PhaseRun {
        kappa_ref,
        from_n: data.members.get(start).map_or(0, |m| m.n),
        ratio_cap,
        positive: false,
        r: Vec::new(),
        max_ratio: 1.0,
        worst: None,
        zeros: Vec::new(),
        missing: Vec::new(),
    };
    for (i, m) in data.members.iter().enumerate() {
        let r = m.profile.obs_diam_at(kappa_ref);
        run.r.push(r);
        for &k in kappas {
            let v = m.profile.obs_diam_at(k);
            match (r, v) {
                (Some(r), Some(v)) if r > 0.0 && v > 0.0 => {
                    if i < start {
                        continue;
                    }
                    let ratio = (v / r).max(r / v);
                    if ratio > run.max_ratio {
                        run.max_ratio = ratio;
                        run.worst = Some((m.n, k));
                    }
                }
                (Some(_), Some(v)) => {
                    if v == 0.0 {
                        run.zeros.push((m.n, k));
                    }
                }
                _ => run.missing.push((m.n, k)),
            }
        }
        if r == Some(0.0) && !run.zeros.contains(&(m.n, kappa_ref)) {
            run.zeros.push((m.n, kappa_ref));
        }
    }
    let in_tail = |&(n, _): &(usize, f64)| n >= run.from_n;
    run.positive = !data.members.is_empty()
        && !run.zeros.iter().any(in_tail)
        && !run.missing.iter().any(in_tail)
        && run.max_ratio <= ratio_cap;
    run
}

/// Uniform comparability of `ObsDiam(X_n; -κ)` with `r_n` across the grid.
///
/// The first reference level is tested against `ratio_cap`. Ratios at the
/// other levels are products of two ratios at the first one, so they are
/// tested against `ratio_cap²`. Zero values in the tail fail every run.
pub fn phase_transition_detect(
    data: &FamilyData,
    kappas: &[f64],
    kappa_refs: &[f64],
    ratio_cap: f64,
) -> PhaseVerdict {
    if data.members.is_empty() {
        return PhaseVerdict {
            positive: false,
            agreement: true,
            ratio_cap,
            runs: Vec::new(),
            c: Vec::new(),
        };
    }
    let runs: Vec<PhaseRun> = kappa_refs
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            phase_run(
                data,
                kappas,
                k,
                if i == 0 {
                    ratio_cap
                } else {
                    ratio_cap * ratio_cap
                },
            )
        })
        .collect();
    let agreement = runs.windows(2).all(|w| w[0].positive == w[1].positive);
    let positive = !runs.is_empty() && runs.iter().all(|r| r.positive);
    let c = if positive {
        data.members
            .iter()
            .zip(&runs[0].r)
            .filter_map(|(m, r)| r.filter(|&r| r > 0.0).map(|r| (m.n, 1.0 / r)))
            .collect()
    } else {
        Vec::new()
    };
    PhaseVerdict {
        positive,
        agreement,
        ratio_cap,
        runs,
        c,
    }
}
