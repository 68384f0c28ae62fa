//! Prokhorov distance between two probability vectors on a finite ambient.
//!
//! With `U_ε(A)` the open ε-neighbourhood, the condition
//! `μ(U_ε(A)) ≥ ν(A) - ε` only changes when `ε` crosses a pairwise distance.
//! For `ε ∈ (δ_k, δ_{k+1}]` the neighbourhood is the closed `δ_k`-ball, so the
//! worst violation is the Hall deficiency
//! `D_k = max_A ν(A) - μ(N_k(A))` of the bipartite graph `d ≤ δ_k`, and the
//! distance is `max(δ_k, D_k)` for the first level with `D_k ≤ δ_{k+1}`.

use serde::{Deserialize, Serialize};

use super::flow::FlowNetwork;
use super::rational::common_denominator;
use crate::error::{Error, Result};
use crate::space::AmbientMetric;

/// Largest support handled by subset enumeration in automatic mode.
pub const SUBSET_MAX_POINTS: usize = 16;

const EXACT_DENOMINATOR: u64 = 1_000_000;
/// Masses are at most 1, so `x · 1e15` stays an exact f64 integer below 2^53.
const SCALE: f64 = 1e15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProkhorovMethod {
    Auto,
    Subsets,
    Flow,
}

pub(crate) fn check_probability(n: usize, m: &[f64], name: &str) -> Result<()> {
    if m.len() != n {
        return Err(Error::invalid(format!(
            "{name} has {} entries for an ambient of {n} points",
            m.len()
        )));
    }
    if m.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
        return Err(Error::invalid(format!(
            "{name} has a negative or non-finite entry"
        )));
    }
    let total: f64 = m.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!("{name} sums to {total}, not 1")));
    }
    Ok(())
}

pub fn prokhorov(ambient: &AmbientMetric, mu: &[f64], nu: &[f64]) -> Result<f64> {
    prokhorov_with(ambient, mu, nu, ProkhorovMethod::Auto)
}

pub fn prokhorov_with(
    ambient: &AmbientMetric,
    mu: &[f64],
    nu: &[f64],
    method: ProkhorovMethod,
) -> Result<f64> {
    let n = ambient.len();
    check_probability(n, mu, "μ")?;
    check_probability(n, nu, "ν")?;
    let support: Vec<usize> = (0..n).filter(|&i| mu[i] > 0.0 || nu[i] > 0.0).collect();
    let use_subsets = match method {
        ProkhorovMethod::Subsets => {
            if support.len() > 20 {
                return Err(Error::capacity(
                    "subset enumeration support",
                    20,
                    "use the flow method",
                ));
            }
            true
        }
        ProkhorovMethod::Flow => false,
        ProkhorovMethod::Auto => support.len() <= SUBSET_MAX_POINTS,
    };
    let dist = |a: usize, b: usize| ambient.dist(support[a], support[b]);
    let mu_s: Vec<f64> = support.iter().map(|&i| mu[i]).collect();
    let nu_s: Vec<f64> = support.iter().map(|&i| nu[i]).collect();
    let mut levels = vec![0.0];
    for a in 0..support.len() {
        for b in a + 1..support.len() {
            levels.push(dist(a, b));
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let (deficiency, slack): (Box<dyn Fn(f64) -> f64>, f64) = if use_subsets {
        let m = support.len();
        let deficiency = move |delta: f64| {
            let nbr: Vec<u32> = (0..m)
                .map(|a| {
                    (0..m)
                        .filter(|&b| dist(a, b) <= delta)
                        .fold(0u32, |acc, b| acc | 1 << b)
                })
                .collect();
            hall_subsets(&nbr, &mu_s, &nu_s).max(hall_subsets(&nbr, &nu_s, &mu_s))
        };
        (Box::new(deficiency), 0.0)
    } else {
        let (den, caps_mu, caps_nu, slack) = integer_masses(&mu_s, &nu_s);
        let m = support.len();
        let deficiency = move |delta: f64| {
            let mut g = FlowNetwork::new(2 * m + 2);
            let (s, t) = (2 * m, 2 * m + 1);
            for a in 0..m {
                if caps_nu[a] > 0 {
                    g.add_edge(s, a, caps_nu[a]);
                }
                if caps_mu[a] > 0 {
                    g.add_edge(m + a, t, caps_mu[a]);
                }
                for b in 0..m {
                    if dist(a, b) <= delta && caps_nu[a] > 0 && caps_mu[b] > 0 {
                        g.add_edge(a, m + b, i64::MAX / 4);
                    }
                }
            }
            let total: i64 = caps_nu.iter().sum();
            (total - g.max_flow(s, t)) as f64 / den
        };
        (Box::new(deficiency), slack)
    };

    // D_k is nonincreasing and δ_{k+1} increasing, so the admissible levels
    // form a suffix
    let admissible = |k: usize, d: f64| k + 1 >= levels.len() || d <= levels[k + 1];
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    let mut d_hi = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        let d = deficiency(levels[mid]);
        if admissible(mid, d) {
            hi = mid;
            d_hi = Some(d);
        } else {
            lo = mid + 1;
        }
    }
    let d_hi = d_hi.unwrap_or_else(|| deficiency(levels[hi]));
    Ok((levels[hi].max(d_hi) + slack).min(1.0))
}

/// `max_A ν(A) - μ(N(A))` over subsets `A`, with `N(A)` given by the
/// neighbourhood masks.
fn hall_subsets(nbr: &[u32], mu: &[f64], nu: &[f64]) -> f64 {
    let m = nbr.len();
    let full = 1usize << m;
    let mut cover = vec![0u32; full];
    let mut nu_sum = vec![0.0f64; full];
    let mut mu_mass = vec![0.0f64; full];
    let mut best = 0.0f64;
    for set in 1..full {
        let low = set.trailing_zeros() as usize;
        let rest = set & (set - 1);
        cover[set] = cover[rest] | nbr[low];
        nu_sum[set] = nu_sum[rest] + nu[low];
        mu_mass[set] = mu_mass[rest] + mu[low];
    }
    for set in 1..full {
        let d = nu_sum[set] - mu_mass[cover[set] as usize];
        if d > best {
            best = d;
        }
    }
    best
}

/// Integer capacities for the flow: exact over a common denominator when
/// one of modest size exists, otherwise rounded at `1e-15` granularity with
/// the accumulated rounding returned as slack.
fn integer_masses(mu: &[f64], nu: &[f64]) -> (f64, Vec<i64>, Vec<i64>, f64) {
    let all: Vec<f64> = mu.iter().chain(nu).copied().collect();
    if let Some(q) = common_denominator(&all, EXACT_DENOMINATOR, 1e-12) {
        if q <= EXACT_DENOMINATOR {
            let to_int = |v: &[f64]| v.iter().map(|x| (x * q as f64).round() as i64).collect();
            return (q as f64, to_int(mu), to_int(nu), 0.0);
        }
    }
    let to_int = |v: &[f64]| v.iter().map(|x| (x * SCALE).round() as i64).collect();
    (SCALE, to_int(mu), to_int(nu), mu.len() as f64 / SCALE)
}
