//! The partial-diameter inequality for Prokhorov-close measures on the line.

use serde::{Deserialize, Serialize};

use super::prokhorov::prokhorov;
use crate::error::Result;
use crate::measure::RealMeasure;
use crate::space::AmbientMetric;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpDiamReport {
    pub prokhorov: f64,
    pub precondition_holds: bool,
    /// `diam(μ; 1 - (κ + ε))`
    pub lhs: f64,
    /// `diam(ν; 1 - κ) + 2ε`
    pub rhs: f64,
    /// `None` when the precondition `d_P(μ, ν) < ε` fails.
    pub holds: Option<bool>,
}

/// Prokhorov distance of two measures on the line over the union of their
/// supports.
pub fn prokhorov_line(mu: &RealMeasure, nu: &RealMeasure) -> Result<f64> {
    let mut points: Vec<f64> = mu
        .positions()
        .iter()
        .chain(nu.positions())
        .copied()
        .collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    let weights = |m: &RealMeasure| {
        let mut w = vec![0.0; points.len()];
        for (x, a) in m.atoms() {
            w[points.binary_search_by(|p| p.total_cmp(&x)).unwrap()] += a;
        }
        w
    };
    let ambient = AmbientMetric::from_fn(points.len(), |i, j| (points[i] - points[j]).abs());
    prokhorov(&ambient, &weights(mu), &weights(nu))
}

fn partial_diameter_or_zero(m: &RealMeasure, alpha: f64) -> Result<f64> {
    if alpha <= 0.0 {
        Ok(0.0)
    } else {
        m.partial_diameter(alpha.min(1.0))
    }
}

/// Checks `diam(μ; 1-(κ+ε)) ≤ diam(ν; 1-κ) + 2ε` under `d_P(μ, ν) < ε`.
pub fn check_dp_diam(
    mu: &RealMeasure,
    nu: &RealMeasure,
    kappa: f64,
    eps: f64,
) -> Result<DpDiamReport> {
    let dp = prokhorov_line(mu, nu)?;
    let lhs = partial_diameter_or_zero(mu, 1.0 - (kappa + eps))?;
    let rhs = partial_diameter_or_zero(nu, 1.0 - kappa)? + 2.0 * eps;
    let precondition_holds = dp < eps;
    Ok(DpDiamReport {
        prokhorov: dp,
        precondition_holds,
        lhs,
        rhs,
        holds: precondition_holds.then_some(lhs <= rhs + 1e-12),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn measure(atoms: &[(f64, f64)]) -> RealMeasure {
        RealMeasure::new(atoms.to_vec()).unwrap()
    }

    #[test]
    fn equal_measures() {
        let m = measure(&[(0.0, 0.3), (1.0, 0.4), (2.5, 0.3)]);
        let r = check_dp_diam(&m, &m, 0.2, 0.05).unwrap();
        assert_eq!(r.prokhorov, 0.0);
        assert_eq!(r.holds, Some(true));
    }

    #[test]
    fn shifted_measure() {
        let m = measure(&[(0.0, 0.3), (1.0, 0.4), (2.5, 0.3)]);
        let r = check_dp_diam(&m, &m.shifted(0.05), 0.2, 0.1).unwrap();
        assert!((r.prokhorov - 0.05).abs() < 1e-12);
        assert_eq!(r.holds, Some(true));
    }

    #[test]
    fn failed_precondition_is_reported() {
        let m = measure(&[(0.0, 1.0)]);
        let r = check_dp_diam(&m, &m.shifted(3.0), 0.2, 0.1).unwrap();
        assert!(!r.precondition_holds);
        assert_eq!(r.holds, None);
    }
}
