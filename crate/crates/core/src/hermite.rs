//! Normalized probabilists' Hermite polynomials and multi-indices.
//!
//! `h_0 = 1`, `h_1 = x`, `h_{j+1} = (x h_j - sqrt(j) h_{j-1}) / sqrt(j + 1)`, so
//! `h_2 = (x^2 - 1)/sqrt(2)`. The family is orthonormal under `N(0, 1)`.

use crate::error::{check_dim, Error, Result};
use serde::{Deserialize, Serialize};

/// `h_j(x)`.
pub fn hermite_poly(j: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..j {
        let next = (x * cur - (k as f64).sqrt() * prev) / ((k + 1) as f64).sqrt();
        prev = cur;
        cur = next;
    }
    cur
}

/// Writes `h_0(x), ..., h_{out.len()-1}(x)` into `out`.
pub fn hermite_table(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 1..out.len().saturating_sub(1) {
        out[k + 1] = (x * out[k] - (k as f64).sqrt() * out[k - 1]) / ((k + 1) as f64).sqrt();
    }
}

/// A multi-index `alpha` in `N^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `k * e_i` in dimension `n`.
    pub fn axis(n: usize, i: usize, k: u32) -> Self {
        let mut a = vec![0; n];
        a[i] = k;
        MultiIndex(a)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// Evaluates `h_alpha(x)` without a dimension check.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .filter(|(&a, _)| a > 0)
            .map(|(&a, &xi)| hermite_poly(a, xi))
            .product()
    }
}

/// `h_alpha(x) = prod_i h_{alpha_i}(x_i)`.
pub fn hermite_multi(alpha: &MultiIndex, x: &[f64]) -> Result<f64> {
    check_dim(alpha.dim(), x.len())?;
    Ok(alpha.eval(x))
}

/// Number of multi-indices in `N^n` of total degree at most `d`: `C(n + d, d)`.
pub fn multi_index_count(n: usize, d: u32) -> u128 {
    let mut c: u128 = 1;
    for k in 1..=d as u128 {
        c = c * (n as u128 + k) / k;
    }
    c
}

/// All multi-indices of total degree at most `d`, graded by degree.
pub fn enumerate_multi_indices(n: usize, d: u32) -> Result<Vec<MultiIndex>> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    for deg in 0..=d {
        fill(&mut cur, 0, deg, &mut out);
    }
    Ok(out)
}

fn fill(cur: &mut [u32], pos: usize, left: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == cur.len() {
        cur[pos] = left;
        out.push(MultiIndex(cur.to_vec()));
        cur[pos] = 0;
        return;
    }
    for k in (0..=left).rev() {
        cur[pos] = k;
        fill(cur, pos + 1, left - k, out);
    }
    cur[pos] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomStream;

    #[test]
    fn low_degrees() {
        for x in [-2.0, -0.3, 0.0, 1.7] {
            assert_eq!(hermite_poly(0, x), 1.0);
            assert_eq!(hermite_poly(1, x), x);
            assert!((hermite_poly(2, x) - (x * x - 1.0) / 2f64.sqrt()).abs() < 1e-15);
            let h3 = (x * x * x - 3.0 * x) / 6f64.sqrt();
            assert!((hermite_poly(3, x) - h3).abs() < 1e-14);
        }
        assert!((hermite_poly(2, 0.0) + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn table_matches_scalar() {
        let mut t = [0.0; 9];
        hermite_table(0.83, &mut t);
        for (j, v) in t.iter().enumerate() {
            assert!((v - hermite_poly(j as u32, 0.83)).abs() < 1e-14);
        }
    }

    #[test]
    fn enumeration_counts() {
        for n in 1..5 {
            for d in 0..5 {
                let all = enumerate_multi_indices(n, d).unwrap();
                assert_eq!(all.len() as u128, multi_index_count(n, d));
                assert!(all.iter().all(|a| a.degree() <= d));
                let mut sorted = all.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), all.len());
            }
        }
        assert!(hermite_multi(&MultiIndex::zero(3), &[0.0; 2]).is_err());
    }

    #[test]
    fn univariate_orthonormality() {
        let mut s = RandomStream::new(21, 0);
        let n = 1_000_000;
        let (mut s23, mut s23sq, mut s22, mut s22sq) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let g = s.normal();
            let (h2, h3) = (hermite_poly(2, g), hermite_poly(3, g));
            s23 += h2 * h3;
            s23sq += (h2 * h3).powi(2);
            s22 += h2 * h2;
            s22sq += h2.powi(4);
        }
        let nf = n as f64;
        let se = |s: f64, sq: f64| ((sq / nf - (s / nf).powi(2)) / nf).sqrt();
        assert!((s23 / nf).abs() <= 3.0 * se(s23, s23sq));
        assert!((s22 / nf - 1.0).abs() <= 3.0 * se(s22, s22sq));
    }
}
