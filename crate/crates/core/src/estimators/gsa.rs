//! Analytic Gaussian surface area values and bounds.

use crate::error::{Error, Result};
use crate::special::chi_pdf;

/// Gaussian surface area of the radius-`r` ball in `R^n`: the chi density at `r`.
pub fn gsa_ball_analytic(n: usize, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::param(format!("radius must be positive, got {r}")));
    }
    chi_pdf(r, n)
}

/// `sqrt(2 ln s) + 2`, the surface-area bound for an intersection of `s` halfspaces.
pub fn nazarov_gsa_bound(s: u64) -> Result<f64> {
    if s < 2 {
        return Err(Error::param(format!("facet count must be at least 2, got {s}")));
    }
    Ok((2.0 * (s as f64).ln()).sqrt() + 2.0)
}

/// `constant * n^{1/4}`, the surface-area bound for any convex body.
pub fn ball_gsa_bound(n: usize, constant: f64) -> f64 {
    constant * (n as f64).powf(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ball_values() {
        assert!((gsa_ball_analytic(100, 10.0).unwrap() - 0.563_250_063_251_908_3).abs() < 1e-12);
        for n in (16..=1024).step_by(16) {
            let v = gsa_ball_analytic(n, (n as f64).sqrt()).unwrap();
            assert!(v <= 1.0 / PI.sqrt() + 0.05, "n={n}: {v}");
            assert!(v <= ball_gsa_bound(n, 1.0));
        }
    }

    #[test]
    fn nazarov_formula() {
        assert!((nazarov_gsa_bound(3).unwrap() - ((2.0 * 3f64.ln()).sqrt() + 2.0)).abs() < 1e-15);
        assert!(nazarov_gsa_bound(1).is_err());
    }
}
