#![allow(dead_code)]

use mminv::FiniteMMSpace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_masses(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|m| m / total).collect()
}

/// Shortest-path metric of a complete graph with random edge weights.
pub fn random_space(rng: &mut impl Rng, n: usize) -> FiniteMMSpace {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rng.random_range(0.1..1.0);
            d[i][j] = w;
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let mass = random_masses(rng, n);
    FiniteMMSpace::from_fn(mass, |i, j| d[i][j])
}

/// Points of the plane with the Euclidean metric.
pub fn random_planar(rng: &mut impl Rng, n: usize) -> FiniteMMSpace {
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random::<f64>(), rng.random::<f64>()))
        .collect();
    let mass = random_masses(rng, n);
    FiniteMMSpace::from_fn(mass, |i, j| {
        ((pts[i].0 - pts[j].0).powi(2) + (pts[i].1 - pts[j].1).powi(2)).sqrt()
    })
}

pub fn complete_graph(n: usize) -> FiniteMMSpace {
    FiniteMMSpace::uniform(n, |_, _| 1.0)
}
