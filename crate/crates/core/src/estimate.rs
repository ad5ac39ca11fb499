//! Monte Carlo estimates with standard errors and confidence intervals.

use crate::special::phi_inv;
use serde::{Deserialize, Serialize};

/// Default two-sided confidence level attached to estimates.
pub const DEFAULT_CI_LEVEL: f64 = 0.95;

/// A point estimate with its sampling uncertainty.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub ci_level: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

fn z_of(level: f64) -> f64 {
    phi_inv(0.5 + 0.5 * level).unwrap_or(f64::INFINITY)
}

impl Estimate {
    /// Normal-approximation interval around `value`.
    pub fn normal(value: f64, stderr: f64, n_samples: u64) -> Self {
        let z = z_of(DEFAULT_CI_LEVEL);
        Estimate {
            value,
            stderr,
            n_samples,
            ci_level: DEFAULT_CI_LEVEL,
            ci_low: value - z * stderr,
            ci_high: value + z * stderr,
        }
    }

    /// Sample mean of i.i.d. draws summarised by `acc`.
    pub fn from_moments(acc: &Moments) -> Self {
        Self::normal(acc.mean(), acc.stderr(), acc.count())
    }

    /// Bernoulli proportion with a Wilson score interval.
    pub fn bernoulli(successes: u64, n: u64) -> Self {
        assert!(n > 0, "bernoulli estimate needs at least one trial");
        let nf = n as f64;
        let p = successes as f64 / nf;
        let stderr = if n > 1 {
            (p * (1.0 - p) / (nf - 1.0)).sqrt()
        } else {
            0.0
        };
        let z = z_of(DEFAULT_CI_LEVEL);
        let z2 = z * z;
        let denom = 1.0 + z2 / nf;
        let centre = (p + z2 / (2.0 * nf)) / denom;
        let half = z * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
        Estimate {
            value: p,
            stderr,
            n_samples: n,
            ci_level: DEFAULT_CI_LEVEL,
            ci_low: (centre - half).max(0.0),
            ci_high: (centre + half).min(1.0),
        }
    }

    /// An exactly known value.
    pub fn exact(value: f64) -> Self {
        Self::normal(value, 0.0, 1)
    }

    /// Multiplies value, error and interval by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let (a, b) = (self.ci_low * c, self.ci_high * c);
        Estimate {
            value: self.value * c,
            stderr: self.stderr * c.abs(),
            n_samples: self.n_samples,
            ci_level: self.ci_level,
            ci_low: a.min(b),
            ci_high: a.max(b),
        }
    }

    /// `a + c * self` with the same relative interval.
    pub fn affine(&self, a: f64, c: f64) -> Self {
        let s = self.scaled(c);
        Estimate {
            value: s.value + a,
            ci_low: s.ci_low + a,
            ci_high: s.ci_high + a,
            ..s
        }
    }

    /// `|value - target| <= k * stderr`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.value - target).abs() <= k * self.stderr
    }

    /// Independent-errors agreement: `|a - b| <= k * sqrt(se_a^2 + se_b^2) + slack`.
    pub fn agrees_with(&self, other: &Estimate, k: f64, slack: f64) -> bool {
        (self.value - other.value).abs() <= k * self.stderr.hypot(other.stderr) + slack
    }
}

/// Streaming mean and variance (Welford), mergeable in a fixed order.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    /// Chan's pairwise combination.
    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        self.mean += d * w;
        self.m2 += other.m2 + d * d * self.n as f64 * w;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n > 1 {
            (self.m2 / (self.n - 1) as f64).max(0.0)
        } else {
            0.0
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.n > 0 {
            (self.variance() / self.n as f64).sqrt()
        } else {
            0.0
        }
    }
}
