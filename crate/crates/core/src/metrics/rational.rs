//! Rational approximation of floating masses.

/// Best rational approximation `p/q` of `x ≥ 0` with `q ≤ max_den`, by
/// continued fractions.
pub(crate) fn best_rational(x: f64, max_den: u64) -> (u64, u64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut r = x;
    loop {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (
            a.saturating_mul(p1).saturating_add(p0),
            a.saturating_mul(q1).saturating_add(q0),
        );
        if q2 > max_den {
            // largest admissible semiconvergent
            let k = (max_den - q0) / q1.max(1);
            let (ps, qs) = (k * p1 + p0, k * q1 + q0);
            let better = |p: u64, q: u64| (x - p as f64 / q as f64).abs();
            if q1 > 0 && better(p1, q1) <= better(ps, qs) {
                return (p1, q1);
            }
            return (ps, qs.max(1));
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a as f64;
        if frac < 1e-15 || (x - p1 as f64 / q1 as f64).abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    (p1, q1.max(1))
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least common denominator of `values` when each is within `tol` of a
/// fraction with denominator at most `max_den`; the lcm may exceed `max_den`.
pub(crate) fn common_denominator(values: &[f64], max_den: u64, tol: f64) -> Option<u64> {
    let mut l = 1u64;
    for &x in values {
        let (p, q) = best_rational(x, max_den);
        if (x - p as f64 / q as f64).abs() > tol {
            return None;
        }
        l = (l / gcd(l, q)).checked_mul(q)?;
    }
    Some(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_simple_fractions() {
        assert_eq!(best_rational(0.25, 100), (1, 4));
        assert_eq!(best_rational(1.0 / 3.0, 100), (1, 3));
        assert_eq!(best_rational(0.0, 100), (0, 1));
        assert_eq!(best_rational(std::f64::consts::PI, 1000), (355, 113));
    }

    #[test]
    fn common_denominators() {
        assert_eq!(common_denominator(&[0.5, 0.25, 0.25], 64, 1e-12), Some(4));
        assert_eq!(
            common_denominator(&[1.0 / 3.0, 0.5, 1.0 / 6.0], 64, 1e-12),
            Some(6)
        );
        assert_eq!(common_denominator(&[0.123456789], 64, 1e-12), None);
    }
}
