//! Parametrized families `X_n` of finite mm-spaces.

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::rng;
use crate::space::FiniteMMSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    /// `K_n` with `d ≡ 1` and the uniform measure.
    CompleteGraph,
    /// `{0,1}^n` with Hamming distance.
    HypercubeHamming,
    /// The cycle graph `C_n` with its path metric.
    Cycle,
    /// Midpoints `(i + 1/2)/n` of `[0, 1]`, uniform.
    IntervalDiscretization,
    /// `n` equal-mass quantile atoms of the centred Gaussian with standard
    /// deviation `lambda`.
    GaussianLine,
    /// Two clusters of `cluster_size` points at mutual distance `gap`, each
    /// of diameter `1/n` and mass `1/2`.
    TwoCluster,
    /// Two points at distance `n` with masses `1/2`.
    TwoPoint,
    /// `n` uniform random points of `[0,1]^dimension`, Euclidean distance.
    RandomEuclidean,
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::CompleteGraph => "complete_graph",
            Generator::HypercubeHamming => "hypercube_hamming",
            Generator::Cycle => "cycle",
            Generator::IntervalDiscretization => "interval_discretization",
            Generator::GaussianLine => "gaussian_line",
            Generator::TwoCluster => "two_cluster",
            Generator::TwoPoint => "two_point",
            Generator::RandomEuclidean => "random_euclidean",
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::invalid(format!("unknown family generator {s:?}")))
    }
}

fn one() -> f64 {
    1.0
}
fn two() -> usize {
    2
}
fn step_default() -> usize {
    1
}
fn max_points_default() -> usize {
    4096
}

/// A family together with its index range and generator parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub generator: Generator,
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default = "step_default")]
    pub step: usize,
    /// Indices `n_min, 2·n_min, 4·n_min, ...` instead of the arithmetic range.
    #[serde(default)]
    pub doubling: bool,
    #[serde(default = "one")]
    pub gap: f64,
    #[serde(default = "two")]
    pub dimension: usize,
    #[serde(default = "two")]
    pub cluster_size: usize,
    #[serde(default = "one")]
    pub lambda: f64,
    #[serde(default)]
    pub seed: u64,
    /// Every member is rescaled by `n^scale_exponent`.
    #[serde(default)]
    pub scale_exponent: f64,
    #[serde(default = "max_points_default")]
    pub max_points: usize,
}

impl FamilySpec {
    pub fn new(generator: Generator, n_min: usize, n_max: usize) -> Self {
        FamilySpec {
            generator,
            n_min,
            n_max,
            step: 1,
            doubling: false,
            gap: 1.0,
            dimension: 2,
            cluster_size: 2,
            lambda: 1.0,
            seed: 0,
            scale_exponent: 0.0,
            max_points: max_points_default(),
        }
    }

    pub fn indices(&self) -> Result<Vec<usize>> {
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(Error::invalid(format!(
                "index range {}..{} is empty or starts at 0",
                self.n_min, self.n_max
            )));
        }
        if self.doubling {
            Ok(
                std::iter::successors(Some(self.n_min), |&n| n.checked_mul(2))
                    .take_while(|&n| n <= self.n_max)
                    .collect(),
            )
        } else {
            Ok((self.n_min..=self.n_max)
                .step_by(self.step.max(1))
                .collect())
        }
    }

    /// Number of points of `X_n`, or `None` on overflow.
    pub fn size(&self, n: usize) -> Option<usize> {
        match self.generator {
            Generator::HypercubeHamming => (n < usize::BITS as usize).then(|| 1usize << n),
            Generator::TwoCluster => self.cluster_size.checked_mul(2),
            Generator::TwoPoint => Some(2),
            _ => Some(n),
        }
    }
}

/// The members `X_n` for every index of the spec, in index order.
pub fn generate_family(spec: &FamilySpec) -> Result<Vec<(usize, FiniteMMSpace)>> {
    spec.indices()?
        .into_iter()
        .map(|n| generate_member(spec, n).map(|x| (n, x)))
        .collect()
}

pub fn generate_member(spec: &FamilySpec, n: usize) -> Result<FiniteMMSpace> {
    let size = spec
        .size(n)
        .filter(|&s| s <= spec.max_points)
        .ok_or_else(|| {
            Error::capacity(
                format!("{} member {n}", spec.generator.name()),
                spec.max_points as u64,
                "lower n_max or raise max_points",
            )
        })?;
    let space = match spec.generator {
        Generator::CompleteGraph => {
            FiniteMMSpace::uniform(size, |i, j| if i == j { 0.0 } else { 1.0 })
        }
        Generator::HypercubeHamming => {
            FiniteMMSpace::uniform(size, |i, j| (i ^ j).count_ones() as f64)
        }
        Generator::Cycle => FiniteMMSpace::uniform(size, |i, j| {
            let d = i.abs_diff(j);
            d.min(size - d) as f64
        }),
        Generator::IntervalDiscretization => {
            let pos: Vec<f64> = (0..size).map(|i| (i as f64 + 0.5) / size as f64).collect();
            FiniteMMSpace::on_line(&pos, vec![1.0 / size as f64; size])
        }
        Generator::GaussianLine => {
            if !(spec.lambda > 0.0) || !spec.lambda.is_finite() {
                return Err(Error::invalid(format!(
                    "lambda must be positive, got {}",
                    spec.lambda
                )));
            }
            let normal =
                Normal::new(0.0, spec.lambda).map_err(|e| Error::invalid(e.to_string()))?;
            let pos: Vec<f64> = (0..size)
                .map(|i| normal.inverse_cdf((i as f64 + 0.5) / size as f64))
                .collect();
            FiniteMMSpace::on_line(&pos, vec![1.0 / size as f64; size])
        }
        Generator::TwoCluster => {
            let k = spec.cluster_size;
            if k == 0 || !(spec.gap >= 1.0 / n as f64) {
                return Err(Error::invalid(
                    "two_cluster needs cluster_size ≥ 1 and gap ≥ 1/n",
                ));
            }
            let within = 1.0 / n as f64;
            FiniteMMSpace::uniform(size, |i, j| {
                if i == j {
                    0.0
                } else if i / k == j / k {
                    within
                } else {
                    spec.gap
                }
            })
        }
        Generator::TwoPoint => FiniteMMSpace::two_point(n as f64, 0.5),
        Generator::RandomEuclidean => {
            let mut rng = rng::stream(spec.seed, n as u64);
            let dim = spec.dimension.max(1);
            let pts: Vec<Vec<f64>> = (0..size)
                .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
                .collect();
            FiniteMMSpace::uniform(size, |i, j| {
                pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
        }
    };
    if spec.scale_exponent != 0.0 {
        space.scale((n as f64).powf(spec.scale_exponent))
    } else {
        Ok(space)
    }
}
