//! Upper bounds on the box distance between finite mm-spaces.
//!
//! Both spaces are refined to `q` equal-mass copies of their points, which
//! turns parameters of `[0, 1)` into bijections between the copies. For a
//! bijection `σ` the best exceptional set is found by discarding copies
//! until every remaining distance discrepancy is at most `ε`, with `ε` also
//! bounding the discarded fraction.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rational::common_denominator;
use super::EstimateKind;
use crate::error::{Error, Result};
use crate::rng;
use crate::space::FiniteMMSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoxConfig {
    /// Largest common mass denominator tried when refining.
    pub refinement_cap: u64,
    /// Refined sizes up to this bound are searched exhaustively.
    pub exhaustive_max: usize,
    pub restarts: usize,
    pub swaps: usize,
    pub seed: u64,
}

impl Default for BoxConfig {
    fn default() -> Self {
        BoxConfig {
            refinement_cap: 64,
            exhaustive_max: 8,
            restarts: 8,
            swaps: 400,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxReport {
    pub value: f64,
    pub kind: EstimateKind,
    pub exhaustive: bool,
    /// Number of copies in the common refinement.
    pub denominator: u64,
    /// Mass rounding included in `value`.
    pub rounding_error: f64,
    /// `(x, y)` point pair carried by each copy.
    pub pairs: Vec<(usize, usize)>,
    /// Copies in the exceptional set.
    pub discarded: Vec<usize>,
}

const ROUNDING_TOL: f64 = 1e-9;

/// Copy counts of both spaces over the smallest workable denominator.
fn refine(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    cap: u64,
) -> Result<(u64, Vec<usize>, Vec<usize>, f64)> {
    let counts = |s: &FiniteMMSpace, q: u64| -> Option<(Vec<usize>, f64)> {
        let c: Vec<usize> = s
            .masses()
            .iter()
            .map(|m| (m * q as f64).round() as usize)
            .collect();
        if c.contains(&0) || c.iter().sum::<usize>() as u64 != q {
            return None;
        }
        let err = s
            .masses()
            .iter()
            .zip(&c)
            .map(|(m, &k)| (m - k as f64 / q as f64).abs())
            .sum();
        Some((c, err))
    };
    for q in 1..=cap {
        if let (Some((cx, ex)), Some((cy, ey))) = (counts(x, q), counts(y, q)) {
            if ex + ey <= ROUNDING_TOL {
                let expand = |c: &[usize]| {
                    c.iter()
                        .enumerate()
                        .flat_map(|(i, &k)| std::iter::repeat_n(i, k))
                        .collect()
                };
                return Ok((q, expand(&cx), expand(&cy), ex + ey));
            }
        }
    }
    let all: Vec<f64> = x.masses().iter().chain(y.masses()).copied().collect();
    let hint = match common_denominator(&all, 1_000_000, 1e-12) {
        Some(q) => format!("the masses need denominator {q}"),
        None => "the masses have no common denominator up to 10^6".to_string(),
    };
    Err(Error::capacity("box refinement denominator", cap, hint))
}

pub fn box_upper(x: &FiniteMMSpace, y: &FiniteMMSpace, config: &BoxConfig) -> Result<BoxReport> {
    x.require_finite("the box distance")?;
    y.require_finite("the box distance")?;
    let (q, xs, ys, rounding_error) = refine(x, y, config.refinement_cap)?;
    let q = q as usize;
    let disc_of = |labels: &[usize]| -> Vec<f64> {
        let mut d = vec![0.0; q * q];
        for s in 0..q {
            for t in 0..q {
                d[s * q + t] = (x.dist(xs[s], xs[t]) - y.dist(labels[s], labels[t])).abs();
            }
        }
        d
    };
    let exhaustive = q <= config.exhaustive_max;
    let (eps, labels, discarded) = if exhaustive {
        exhaustive_search(q, &xs, ys, disc_of)
    } else {
        swap_search(q, ys, disc_of, config)
    };
    Ok(BoxReport {
        value: (eps + rounding_error).min(1.0),
        kind: EstimateKind::UpperBound,
        exhaustive,
        denominator: q as u64,
        rounding_error,
        pairs: xs.iter().copied().zip(labels).collect(),
        discarded,
    })
}

/// Exact `min_S max(maxdisc(S), (q - |S|)/q)` over kept sets `S`.
fn best_kept_set(q: usize, disc: &[f64]) -> (f64, usize) {
    let full = 1usize << q;
    let mut md = vec![0.0f64; full];
    let mut best = (1.0, 0usize);
    for set in 1..full {
        let low = set.trailing_zeros() as usize;
        let rest = set & (set - 1);
        let mut m = md[rest];
        let mut r = rest;
        while r != 0 {
            let t = r.trailing_zeros() as usize;
            m = m.max(disc[low * q + t]);
            r &= r - 1;
        }
        md[set] = m;
        let eps = m.max((q - set.count_ones() as usize) as f64 / q as f64);
        if eps < best.0 {
            best = (eps, set);
        }
    }
    best
}

fn exhaustive_search(
    q: usize,
    xs: &[usize],
    mut labels: Vec<usize>,
    disc_of: impl Fn(&[usize]) -> Vec<f64>,
) -> (f64, Vec<usize>, Vec<usize>) {
    labels.sort_unstable();
    let mut best = (f64::INFINITY, labels.clone(), 0usize);
    loop {
        // copies of one x point are interchangeable
        let canonical = (1..q).all(|s| xs[s] != xs[s - 1] || labels[s] >= labels[s - 1]);
        if canonical {
            let (eps, kept) = best_kept_set(q, &disc_of(&labels));
            if eps < best.0 {
                best = (eps, labels.clone(), kept);
            }
        }
        if !next_permutation(&mut labels) {
            break;
        }
    }
    let discarded = (0..q).filter(|s| best.2 & (1 << s) == 0).collect();
    (best.0, best.1, discarded)
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Upper bound for one bijection: thresholds from the discrepancy values,
/// exceptional sets from a greedy vertex cover of the pairs above threshold.
fn greedy_eps(q: usize, disc: &[f64]) -> (f64, Vec<usize>) {
    let mut values: Vec<f64> = (0..q)
        .flat_map(|s| (s + 1..q).map(move |t| (s, t)))
        .map(|(s, t)| disc[s * q + t])
        .collect();
    values.push(0.0);
    values.sort_by(f64::total_cmp);
    values.dedup();
    let stride = values.len().div_ceil(24).max(1);
    let mut thresholds: Vec<f64> = values.iter().step_by(stride).copied().collect();
    thresholds.push(*values.last().unwrap());
    let mut best = (1.0, (0..q).collect::<Vec<_>>());
    for tau in thresholds {
        if tau >= best.0 {
            break;
        }
        let mut alive = vec![true; q];
        let mut cover = Vec::new();
        loop {
            let degree = |s: usize, alive: &[bool]| {
                (0..q)
                    .filter(|&t| t != s && alive[t] && disc[s * q + t] > tau)
                    .count()
            };
            let pick = (0..q)
                .filter(|&s| alive[s])
                .max_by_key(|&s| (degree(s, &alive), std::cmp::Reverse(s)));
            match pick {
                Some(s) if degree(s, &alive) > 0 => {
                    alive[s] = false;
                    cover.push(s);
                }
                _ => break,
            }
        }
        let eps = tau.max(cover.len() as f64 / q as f64);
        if eps < best.0 {
            cover.sort_unstable();
            best = (eps, cover);
        }
    }
    best
}

fn swap_search(
    q: usize,
    labels: Vec<usize>,
    disc_of: impl Fn(&[usize]) -> Vec<f64>,
    config: &BoxConfig,
) -> (f64, Vec<usize>, Vec<usize>) {
    let mut rng = rng::stream(config.seed, 0xb0c5);
    let mut best = {
        let (e, c) = greedy_eps(q, &disc_of(&labels));
        (e, labels.clone(), c)
    };
    for restart in 0..config.restarts.max(1) {
        let mut cur = labels.clone();
        if restart > 0 {
            cur.shuffle(&mut rng);
        }
        let (mut cur_eps, mut cur_cover) = greedy_eps(q, &disc_of(&cur));
        for _ in 0..config.swaps {
            let (a, b) = (rng.random_range(0..q), rng.random_range(0..q));
            if cur[a] == cur[b] {
                continue;
            }
            cur.swap(a, b);
            let (e, c) = greedy_eps(q, &disc_of(&cur));
            if e < cur_eps {
                cur_eps = e;
                cur_cover = c;
            } else {
                cur.swap(a, b);
            }
        }
        if cur_eps < best.0 {
            best = (cur_eps, cur, cur_cover);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_spaces() {
        let x = FiniteMMSpace::uniform(4, |i, j| (i as f64 - j as f64).abs());
        let r = box_upper(&x, &x, &BoxConfig::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.exhaustive);
    }

    #[test]
    fn one_point_against_two_points() {
        let r = box_upper(
            &FiniteMMSpace::one_point(),
            &FiniteMMSpace::two_point(1.0, 0.5),
            &BoxConfig::default(),
        )
        .unwrap();
        // discarding one of the two copies leaves no discrepancy
        assert_eq!(r.value, 0.5);
        assert_eq!(r.denominator, 2);
    }

    #[test]
    fn symmetric_in_arguments() {
        let x = FiniteMMSpace::from_fn(vec![0.25, 0.25, 0.5], |i, j| {
            if i == j {
                0.0
            } else {
                1.0 + (i + j) as f64 * 0.1
            }
        });
        let y = FiniteMMSpace::two_point(0.7, 0.25);
        let a = box_upper(&x, &y, &BoxConfig::default()).unwrap().value;
        let b = box_upper(&y, &x, &BoxConfig::default()).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn refinement_cap_error_names_the_denominator() {
        let x = FiniteMMSpace::two_point(1.0, 1.0 / 97.0);
        let err = box_upper(&x, &x, &BoxConfig::default()).unwrap_err();
        assert!(err.to_string().contains("97"), "{err}");
    }

    #[test]
    fn swap_search_is_a_valid_bound() {
        let n = 12;
        let x = FiniteMMSpace::uniform(n, |i, j| (i as f64 - j as f64).abs() / n as f64);
        let r = box_upper(&x, &x, &BoxConfig::default()).unwrap();
        assert!(!r.exhaustive);
        // the identity start is already optimal
        assert_eq!(r.value, 0.0);
    }
}
