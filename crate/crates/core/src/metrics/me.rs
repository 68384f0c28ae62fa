//! The `me` distance between maps into a finite ambient.

use crate::error::{Error, Result};
use crate::space::AmbientMetric;

/// Smallest `ε ≥ 0` with `mass{x : d(f(x), g(x)) > ε} ≤ ε`.
///
/// `f` and `g` map base points to ambient indices; `mass` is the base
/// probability vector.
pub fn me_distance(mass: &[f64], ambient: &AmbientMetric, f: &[usize], g: &[usize]) -> Result<f64> {
    if f.len() != mass.len() || g.len() != mass.len() {
        return Err(Error::invalid(format!(
            "maps have {} and {} values for {} base points",
            f.len(),
            g.len(),
            mass.len()
        )));
    }
    if let Some(&p) = f.iter().chain(g).find(|&&p| p >= ambient.len()) {
        return Err(Error::invalid(format!("point {p} is outside the ambient")));
    }
    let gaps: Vec<f64> = f.iter().zip(g).map(|(&a, &b)| ambient.dist(a, b)).collect();
    Ok(me_from_gaps(mass, &gaps))
}

/// Same scan for precomputed pointwise gaps `d(f(x), g(x))`.
///
/// On `[v_k, v_{k+1})` between consecutive gap values the tail mass is the
/// constant `T_k = mass{gap > v_k}`, so the answer is `max(v_k, T_k)` for the
/// first `k` where that stays below `v_{k+1}`.
pub fn me_from_gaps(mass: &[f64], gaps: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..gaps.len()).collect();
    order.sort_by(|&a, &b| gaps[a].total_cmp(&gaps[b]));
    let mut values = vec![0.0];
    let mut tails = Vec::new();
    let mut tail: f64 = mass.iter().sum();
    // drop every gap ≤ 0 from the tail first
    let mut i = 0;
    while i < order.len() && gaps[order[i]] <= 0.0 {
        tail -= mass[order[i]];
        i += 1;
    }
    tails.push(tail.max(0.0));
    while i < order.len() {
        let v = gaps[order[i]];
        while i < order.len() && gaps[order[i]] == v {
            tail -= mass[order[i]];
            i += 1;
        }
        values.push(v);
        tails.push(tail.max(0.0));
    }
    for k in 0..values.len() {
        let eps = values[k].max(tails[k]);
        if k + 1 == values.len() || eps < values[k + 1] {
            return eps;
        }
    }
    unreachable!("the last level always qualifies")
}
