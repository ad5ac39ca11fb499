use super::Body;
use crate::error::{Error, Result};
use crate::special::gaussian_abs_moment;
use serde::{Deserialize, Serialize};

/// `{x : sum_i |x_i|^p <= budget}`; for `p = inf`, `{x : max_i |x_i| <= budget}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpBall {
    dim: usize,
    p: f64,
    budget: f64,
}

impl LpBall {
    pub fn new(dim: usize, p: f64, budget: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !(p >= 1.0) {
            return Err(Error::param(format!("p must be at least 1, got {p}")));
        }
        if !(budget > 0.0) {
            return Err(Error::param(format!("budget must be positive, got {budget}")));
        }
        Ok(LpBall { dim, p, budget })
    }

    /// Euclidean ball of radius `r`.
    pub fn euclidean(dim: usize, r: f64) -> Result<Self> {
        Self::new(dim, 2.0, r * r)
    }

    /// `B_p` with budget `n * A_p`, so the p-power sum sits at its mean.
    pub fn canonical(dim: usize, p: f64) -> Result<Self> {
        if p.is_infinite() {
            return Err(Error::param("the canonical ball needs finite p"));
        }
        Self::new(dim, p, dim as f64 * gaussian_abs_moment(p))
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    /// `budget^(1/p)`, the radius in the `p`-norm.
    pub fn radius(&self) -> f64 {
        if self.p.is_infinite() {
            self.budget
        } else {
            self.budget.powf(1.0 / self.p)
        }
    }

    /// `sum |x_i|^p`, or `max |x_i|` when `p = inf`.
    pub fn p_power(&self, x: &[f64]) -> f64 {
        if self.p.is_infinite() {
            x.iter().fold(0.0f64, |m, v| m.max(v.abs()))
        } else if self.p == 1.0 {
            x.iter().map(|v| v.abs()).sum()
        } else if self.p == 2.0 {
            x.iter().map(|v| v * v).sum()
        } else {
            x.iter().map(|v| v.abs().powf(self.p)).sum()
        }
    }

    /// `r * ||v||_q` with `1/p + 1/q = 1`.
    pub fn support_lp(&self, v: &[f64]) -> f64 {
        let r = self.radius();
        let q_norm = if self.p == 1.0 {
            v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
        } else if self.p.is_infinite() {
            v.iter().map(|x| x.abs()).sum()
        } else if self.p == 2.0 {
            v.iter().map(|x| x * x).sum::<f64>().sqrt()
        } else {
            let q = self.p / (self.p - 1.0);
            v.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q)
        };
        r * q_norm
    }
}

impl Body for LpBall {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, x: &[f64]) -> bool {
        self.p_power(x) <= self.budget
    }

    fn support(&self, v: &[f64]) -> Option<f64> {
        Some(self.support_lp(v))
    }

    fn has_support(&self) -> bool {
        true
    }
}

/// All of `R^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WholeSpace {
    pub dim: usize,
}

impl Body for WholeSpace {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, _x: &[f64]) -> bool {
        true
    }

    fn support(&self, _v: &[f64]) -> Option<f64> {
        Some(f64::INFINITY)
    }

    fn has_support(&self) -> bool {
        true
    }
}
