//! Analytic tail inequalities: the Gaussian Mills-ratio sandwich, the
//! Laurent-Massart chi-squared bound and the normal hazard-rate fact.
//!
//! Each check returns the quantities on both sides so callers can assert the
//! inequality themselves.

use crate::error::{Error, Result};
use crate::special::{ln_chi2_sf, chi2_cdf, log_phi_sf, phi_pdf, phi_sf};
use serde::Serialize;

/// `lower <= exact <= upper` for `exact = 1 - Phi(r)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TailSandwich {
    pub r: f64,
    pub lower: f64,
    pub exact: f64,
    pub upper: f64,
}

impl TailSandwich {
    pub fn holds(&self) -> bool {
        self.lower <= self.exact && self.exact <= self.upper
    }
}

/// `phi(r)(1/r - 1/r^3) <= 1 - Phi(r) <= phi(r)(1/r - 1/r^3 + 3/r^5)`.
pub fn check_gaussian_tail_bound(r: f64) -> Result<TailSandwich> {
    if !(r > 0.0) {
        return Err(Error::param(format!("tail radius must be positive, got {r}")));
    }
    let d = phi_pdf(r);
    let (r1, r3, r5) = (1.0 / r, r.powi(-3), r.powi(-5));
    Ok(TailSandwich {
        r,
        lower: d * (r1 - r3),
        exact: phi_sf(r),
        upper: d * (r1 - r3 + 3.0 * r5),
    })
}

/// Both chi-squared deviation tails against `exp(-t)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Chi2TailCheck {
    pub n: usize,
    pub t: f64,
    pub bound: f64,
    /// `Pr[y >= n + 2 sqrt(n t) + 2 t]`.
    pub exact: f64,
    /// `Pr[y <= n - 2 sqrt(n t)]`, zero when the threshold is negative.
    pub exact_lower: f64,
}

impl Chi2TailCheck {
    pub fn holds(&self) -> bool {
        self.exact <= self.bound && self.exact_lower <= self.bound
    }
}

pub fn check_chi2_tail_bound(n: usize, t: f64) -> Result<Chi2TailCheck> {
    if n == 0 || !(t > 0.0) {
        return Err(Error::param(format!(
            "chi-squared tail check needs n >= 1 and t > 0, got n={n}, t={t}"
        )));
    }
    let nf = n as f64;
    let root = 2.0 * (nf * t).sqrt();
    let hi = nf + root + 2.0 * t;
    let lo = nf - root;
    Ok(Chi2TailCheck {
        n,
        t,
        bound: (-t).exp(),
        exact: ln_chi2_sf(hi, n)?.exp(),
        exact_lower: if lo > 0.0 { chi2_cdf(lo, n)? } else { 0.0 },
    })
}

/// Hazard constant used by the acceptance grid: `ratio <= HAZARD_CONSTANT / eta`.
pub const HAZARD_CONSTANT: f64 = 2.0;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HazardCheck {
    pub a: f64,
    pub b: f64,
    pub eta: f64,
    /// `(1 - Phi(b)) / (1 - Phi(a))`.
    pub ratio: f64,
    /// `1 / eta`; the claim is `ratio <= C / eta` for an absolute `C`.
    pub inv_eta: f64,
}

impl HazardCheck {
    pub fn holds_with(&self, constant: f64) -> bool {
        self.ratio <= constant * self.inv_eta
    }
}

/// Ratio of normal tails at two nearby far-out points.
///
/// Requires `a > b > ln(1/eta) > 2` and `a - b <= ln(1/eta) / a`.
pub fn check_hazard_fact(a: f64, b: f64, eta: f64) -> Result<HazardCheck> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::param(format!("eta must lie in (0, 1), got {eta}")));
    }
    let l = -eta.ln();
    if !(a > b && b > l && l > 2.0) {
        return Err(Error::param(format!(
            "hazard check needs a > b > ln(1/eta) > 2; got a={a}, b={b}, ln(1/eta)={l}"
        )));
    }
    if a - b > l / a {
        return Err(Error::param(format!(
            "hazard check needs a - b <= ln(1/eta)/a; got {} > {}",
            a - b,
            l / a
        )));
    }
    Ok(HazardCheck {
        a,
        b,
        eta,
        ratio: (log_phi_sf(b) - log_phi_sf(a)).exp(),
        inv_eta: 1.0 / eta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sandwich_at_two() {
        let c = check_gaussian_tail_bound(2.0).unwrap();
        let d = phi_pdf(2.0);
        assert!((c.lower - d * (0.5 - 0.125)).abs() < 1e-16);
        assert!((c.upper - d * (0.5 - 0.125 + 3.0 / 32.0)).abs() < 1e-16);
        assert!(c.holds());
        assert!(check_gaussian_tail_bound(0.0).is_err());
    }

    #[test]
    fn chi2_bound_example() {
        let c = check_chi2_tail_bound(10, 5.0).unwrap();
        assert!((c.exact - 1.747_326_581_823_072_3e-4).abs() < 1e-14);
        assert!(c.holds());
    }

    #[test]
    fn hazard_example() {
        let eta = (-4.0f64).exp();
        let h = check_hazard_fact(5.0, 4.5, eta).unwrap();
        assert!((h.ratio - 11.852_972_242_419_698).abs() < 1e-9);
        assert!(h.holds_with(HAZARD_CONSTANT));
        assert!(check_hazard_fact(5.0, 3.0, eta).is_err());
        assert!(check_hazard_fact(5.0, 4.0, eta).is_err());
    }

    proptest! {
        #[test]
        fn sandwich_holds(r in 0.05f64..30.0) {
            prop_assert!(check_gaussian_tail_bound(r).unwrap().holds());
        }

        #[test]
        fn chi2_bound_holds(n in 1usize..400, t in 0.01f64..50.0) {
            prop_assert!(check_chi2_tail_bound(n, t).unwrap().holds());
        }

        #[test]
        fn hazard_holds(l in 2.01f64..40.0, frac in 0.0f64..1.0, gap in 0.01f64..10.0) {
            let b = l + gap;
            let a = b + frac * l / (b + l);
            // a - b <= l / a follows from frac*l/(b+l) <= l/a when a <= b + l.
            if a > b && a - b <= l / a {
                let h = check_hazard_fact(a, b, (-l).exp()).unwrap();
                prop_assert!(h.holds_with(HAZARD_CONSTANT));
            }
        }
    }
}
