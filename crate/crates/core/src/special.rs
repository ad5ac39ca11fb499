//! Analytic probability functions: standard normal, regularized incomplete
//! gamma, chi and chi-squared laws, absolute Gaussian moments.
//!
//! `erfc` and `lgamma` come from `libm`; tails are also available in log form
//! so parameter solvers can work far below `f64` underflow.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `1 / sqrt(2 pi)`.
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Standard normal density.
#[inline]
pub fn phi_pdf(t: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * t * t).exp()
}

/// Standard normal CDF.
#[inline]
pub fn phi_cdf(t: f64) -> f64 {
    0.5 * libm::erfc(-t * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Phi(t)`, accurate in relative terms for large `t`.
#[inline]
pub fn phi_sf(t: f64) -> f64 {
    0.5 * libm::erfc(t * FRAC_1_SQRT_2)
}

/// `ln(1 - Phi(t))`, finite for every finite `t`.
pub fn log_phi_sf(t: f64) -> f64 {
    if t < 0.0 {
        (-phi_sf(-t)).ln_1p()
    } else if t < 25.0 {
        phi_sf(t).ln()
    } else {
        // Laplace continued fraction, evaluated backwards.
        let mut f = t;
        for k in (1..=60).rev() {
            f = t + k as f64 / f;
        }
        -0.5 * t * t - LN_SQRT_2PI - f.ln()
    }
}

/// `ln Phi(t)`.
#[inline]
pub fn log_phi_cdf(t: f64) -> f64 {
    log_phi_sf(-t)
}

#[inline]
fn horner(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
}

const AS241_A: [f64; 8] = [
    3.387_132_872_796_366_6,
    133.141_667_891_784_38,
    1971.590_950_306_551_4,
    13731.693_765_509_461,
    45921.953_931_549_871,
    67265.770_927_008_700,
    33430.575_583_588_128,
    2509.080_928_730_122_7,
];
const AS241_B: [f64; 8] = [
    1.0,
    42.313_330_701_600_911,
    687.187_007_492_057_91,
    5394.196_021_424_751_1,
    21213.794_301_586_596,
    39307.895_800_092_711,
    28729.085_735_721_943,
    5226.495_278_852_545_9,
];
const AS241_C: [f64; 8] = [
    1.423_437_110_749_683_6,
    4.630_337_846_156_545_3,
    5.769_497_221_460_691_4,
    3.647_848_324_763_204_6,
    1.270_458_252_452_368_4,
    0.241_780_725_177_450_61,
    0.022_723_844_989_269_185,
    7.745_450_142_783_414e-4,
];
const AS241_D: [f64; 8] = [
    1.0,
    2.053_191_626_637_758_8,
    1.676_384_830_183_803_8,
    0.689_767_334_985_100_0,
    0.148_103_976_427_480_07,
    0.015_198_666_563_616_457,
    5.475_938_084_995_345e-4,
    1.050_750_071_644_416_8e-9,
];
const AS241_E: [f64; 8] = [
    6.657_904_643_501_103_8,
    5.463_784_911_164_114_4,
    1.784_826_539_917_291_3,
    0.296_560_571_828_504_89,
    0.026_532_189_526_576_123,
    0.001_242_660_947_388_078_4,
    2.711_555_568_743_487_6e-5,
    2.010_334_399_292_288_1e-7,
];
const AS241_F: [f64; 8] = [
    1.0,
    0.599_832_206_555_887_94,
    0.136_929_880_922_735_81,
    0.014_875_361_290_850_615,
    7.868_691_311_456_132_6e-4,
    1.846_318_317_510_054_7e-5,
    1.421_511_758_316_445_9e-7,
    2.044_263_103_389_939_8e-15,
];

fn ppnd16_lower(p: f64) -> f64 {
    // Wichura, AS241; p in (0, 0.5].
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * horner(&AS241_A, r) / horner(&AS241_B, r);
    }
    let r = (-p.ln()).sqrt();
    let x = if r <= 5.0 {
        horner(&AS241_C, r - 1.6) / horner(&AS241_D, r - 1.6)
    } else {
        horner(&AS241_E, r - 5.0) / horner(&AS241_F, r - 5.0)
    };
    -x
}

/// Inverse standard normal CDF.
pub fn phi_inv(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("phi_inv needs p in (0, 1), got {p}")));
    }
    if p > 0.5 {
        return Ok(-lower_quantile(1.0 - p));
    }
    Ok(lower_quantile(p))
}

fn lower_quantile(p: f64) -> f64 {
    let mut x = ppnd16_lower(p);
    // One Newton step against erfc tightens the rational approximation.
    let d = phi_pdf(x);
    if d > 0.0 {
        x -= (phi_cdf(x) - p) / d;
    }
    x
}

/// `ln Gamma(x)` for `x > 0`.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Regularized incomplete gamma pair with log forms.
#[derive(Clone, Copy, Debug)]
pub struct IncGamma {
    pub p: f64,
    pub q: f64,
    pub ln_p: f64,
    pub ln_q: f64,
}

/// Regularized incomplete gamma `P(a, x)`, `Q(a, x)` by series (x < a + 1)
/// or modified Lentz continued fraction (otherwise).
pub fn inc_gamma(a: f64, x: f64) -> Result<IncGamma> {
    if !(a > 0.0) || !(x >= 0.0) {
        return Err(Error::domain(format!("incomplete gamma at a={a}, x={x}")));
    }
    if x == 0.0 {
        return Ok(IncGamma {
            p: 0.0,
            q: 1.0,
            ln_p: f64::NEG_INFINITY,
            ln_q: 0.0,
        });
    }
    if x.is_infinite() {
        return Ok(IncGamma {
            p: 1.0,
            q: 0.0,
            ln_p: 0.0,
            ln_q: f64::NEG_INFINITY,
        });
    }
    let ln_pref = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..100_000 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        let ln_p = sum.ln() + ln_pref;
        let p = ln_p.exp();
        let q = 1.0 - p;
        Ok(IncGamma {
            p,
            q,
            ln_p,
            ln_q: (-p).ln_1p(),
        })
    } else {
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..100_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let ln_q = h.ln() + ln_pref;
        let q = ln_q.exp();
        let p = 1.0 - q;
        Ok(IncGamma {
            p,
            q,
            ln_p: (-q).ln_1p(),
            ln_q,
        })
    }
}

fn check_degrees(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::domain("degrees of freedom must be at least 1"))
    } else {
        Ok(())
    }
}

fn check_nonneg(name: &str, t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be nonnegative, got {t}")))
    }
}

/// `Pr[chi^2(n) <= t]`.
pub fn chi2_cdf(t: f64, n: usize) -> Result<f64> {
    check_degrees(n)?;
    check_nonneg("chi-squared argument", t)?;
    Ok(inc_gamma(0.5 * n as f64, 0.5 * t)?.p)
}

/// `Pr[chi^2(n) >= t]`.
pub fn chi2_sf(t: f64, n: usize) -> Result<f64> {
    check_degrees(n)?;
    check_nonneg("chi-squared argument", t)?;
    Ok(inc_gamma(0.5 * n as f64, 0.5 * t)?.q)
}

/// `ln Pr[chi^2(n) >= t]`.
pub fn ln_chi2_sf(t: f64, n: usize) -> Result<f64> {
    check_degrees(n)?;
    check_nonneg("chi-squared argument", t)?;
    Ok(inc_gamma(0.5 * n as f64, 0.5 * t)?.ln_q)
}

/// Density of the norm of an `n`-dimensional standard Gaussian.
pub fn chi_pdf(r: f64, n: usize) -> Result<f64> {
    check_degrees(n)?;
    check_nonneg("chi argument", r)?;
    if r == 0.0 {
        return Ok(if n == 1 { (2.0 / PI).sqrt() } else { 0.0 });
    }
    let nf = n as f64;
    let ln = (nf - 1.0) * r.ln()
        - 0.5 * r * r
        - (0.5 * nf - 1.0) * std::f64::consts::LN_2
        - ln_gamma(0.5 * nf);
    Ok(ln.exp())
}

/// Mass of the standard Gaussian outside the ball of radius `t`:
/// `Pr[chi^2(n) >= t^2]`.
pub fn tail_m(t: f64, n: usize) -> Result<f64> {
    check_nonneg("radius", t)?;
    chi2_sf(t * t, n)
}

/// `A_p = E|g|^p = sqrt(2^p / pi) * Gamma((p + 1) / 2)`.
pub fn gaussian_abs_moment(p: f64) -> f64 {
    (0.5 * p * std::f64::consts::LN_2 - 0.5 * PI.ln() + ln_gamma(0.5 * (p + 1.0))).exp()
}
