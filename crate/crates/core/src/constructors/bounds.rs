//! Closed-form facet-count bounds, returned as natural logarithms.

use crate::error::{Error, Result};
use serde::Serialize;

/// Multiplicative constants hidden in the asymptotic statements.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    pub universal: f64,
    pub relative: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            universal: 1.0,
            relative: 1.0,
        }
    }
}

fn check_small_eps(n: usize, eps: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if !(eps > 0.0 && eps < 1e-3) {
        return Err(Error::param(format!("eps must lie in (0, 1e-3), got {eps}")));
    }
    Ok(())
}

/// `ln(3 sqrt(n) (9/eps)^{(n-1)/2})`: facets approximating a convex body
/// inside the unit ball to Hausdorff distance `eps`.
pub fn fc_bound_bronstein(n: usize, eps: f64) -> Result<f64> {
    check_small_eps(n, eps)?;
    let nf = n as f64;
    Ok((3.0 * nf.sqrt()).ln() + 0.5 * (nf - 1.0) * (9.0 / eps).ln())
}

/// `((n-1)/2) ln(C (n^{5/4} + 2 n^{3/4} sqrt(ln(2/eps))) / eps)`: any convex
/// set to Gaussian distance `eps`.
pub fn fc_bound_universal(n: usize, eps: f64, constants: BoundConstants) -> Result<f64> {
    check_small_eps(n, eps)?;
    let nf = n as f64;
    let inner = nf.powf(1.25) + 2.0 * nf.powf(0.75) * (2.0 / eps).ln().sqrt();
    Ok(0.5 * (nf - 1.0) * (constants.universal * inner / eps).ln())
}

/// `ln(1/delta) + C n ln((n/eps) ln(1/delta))`: relative error `eps` for a
/// body of volume `1 - delta`.
pub fn fc_bound_relative(n: usize, eps: f64, delta: f64, constants: BoundConstants) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::param(format!("delta must lie in (0, 1), got {delta}")));
    }
    let nf = n as f64;
    let l = (1.0 / delta).ln();
    Ok(l + constants.relative * nf * ((nf / eps) * l).ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bronstein_example() {
        let v = fc_bound_bronstein(3, 1e-4).unwrap();
        assert!((v - ((3.0 * 3f64.sqrt()).ln() + (9e4f64).ln())).abs() < 1e-12);
        assert!(fc_bound_bronstein(3, 1e-3).is_err());
        assert!(fc_bound_universal(3, 0.01, BoundConstants::default()).is_err());
    }

    #[test]
    fn decreasing_in_eps() {
        let c = BoundConstants::default();
        for n in [2, 5, 30] {
            let mut last = (f64::INFINITY, f64::INFINITY, f64::INFINITY);
            for k in 1..50 {
                let eps = 9.9e-4 * 0.8f64.powi(50 - k);
                let cur = (
                    fc_bound_bronstein(n, eps).unwrap(),
                    fc_bound_universal(n, eps, c).unwrap(),
                    fc_bound_relative(n, eps, 0.01, c).unwrap(),
                );
                if k > 1 {
                    assert!(cur.0 < last.0 && cur.1 < last.1 && cur.2 < last.2);
                }
                last = cur;
            }
        }
    }

    #[test]
    fn relative_beats_universal_for_tiny_delta() {
        let c = BoundConstants::default();
        for n in [32usize, 64] {
            let delta = 0.5f64.powi(n as i32);
            let rel = fc_bound_relative(n, 0.01, delta, c).unwrap();
            let uni = fc_bound_universal(n, 0.01 * delta, c).unwrap();
            assert!(rel < uni, "n={n}: {rel} vs {uni}");
            assert!(rel.is_finite() && uni.is_finite());
        }
        let a = fc_bound_relative(32, 0.01, 1e-9, c).unwrap();
        let want = (1e9f64).ln() + 32.0 * ((32.0 / 0.01) * (1e9f64).ln()).ln();
        assert!((a - want).abs() < 1e-9);
    }
}
