//! One-dimensional root finding and minimisation.

use crate::error::{Error, Result};

/// Bisection for an increasing-or-decreasing `f` with a sign change on `[lo, hi]`.
/// Stops when `|f| <= ftol` or the bracket collapses to machine precision.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, ftol: f64) -> Result<f64> {
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.signum() != fhi.signum()) || flo.is_nan() || fhi.is_nan() {
        return Err(Error::Solver(format!(
            "no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
        )));
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..400 {
        mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.abs() <= ftol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Result of [`golden_section`].
#[derive(Clone, Copy, Debug)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
}

/// Golden-section search for a minimum of `f` on `[lo, hi]` using at most
/// `budget` evaluations (at least 2). Returns the best point evaluated.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, budget: usize) -> Minimum {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evals = 2;
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    while evals < budget.max(2) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
            if fc < best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
            if fd < best.1 {
                best = (d, fd);
            }
        }
        evals += 1;
    }
    Minimum {
        x: best.0,
        fx: best.1,
        evaluations: evals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 0.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(bisect(|x| x * x + 1.0, 0.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn golden_parabola() {
        let m = golden_section(|x| (x - 1.3).powi(2), -5.0, 5.0, 60);
        assert!((m.x - 1.3).abs() < 1e-6);
        assert_eq!(m.evaluations, 60);
        let mut calls = 0;
        golden_section(|x| { calls += 1; x }, 0.0, 1.0, 20);
        assert_eq!(calls, 20);
    }
}
