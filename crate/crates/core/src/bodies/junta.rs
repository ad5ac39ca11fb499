use super::{with_scratch, Body, Polytope};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest tuple size [`l1_junta_to_polytope`] will expand (2^20 facets).
pub const MATERIALIZATION_CAP: usize = 20;

/// One constraint `sum_k |x_{i_k}|^p <= theta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JuntaTerm {
    pub indices: Vec<usize>,
    pub theta: f64,
}

/// Facet accounting for a junta intersection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum FacetCount {
    /// `M * 2^m` facets, stored as its base-2 logarithm.
    Finite { log2: f64 },
    NotFinitelyFaceted,
}

impl FacetCount {
    /// The count as an integer when it fits.
    pub fn exact(&self) -> Option<u128> {
        match *self {
            FacetCount::Finite { log2 } if log2 < 127.0 => Some(log2.exp2().round() as u128),
            _ => None,
        }
    }
}

/// Intersection of p-power constraints on coordinate subsets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JuntaIntersection {
    dim: usize,
    p: f64,
    m: usize,
    terms: Vec<JuntaTerm>,
}

impl JuntaIntersection {
    pub fn new(dim: usize, p: f64, terms: Vec<JuntaTerm>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if !(1.0..=2.0).contains(&p) {
            return Err(Error::param(format!("junta power must lie in [1, 2], got {p}")));
        }
        let m = terms.first().map_or(0, |t| t.indices.len());
        for t in &terms {
            if t.indices.len() != m {
                return Err(Error::param("all junta tuples must have the same size"));
            }
            check_tuple(dim, &t.indices)?;
            if t.theta.is_nan() {
                return Err(Error::param("junta threshold is NaN"));
            }
        }
        Ok(JuntaIntersection { dim, p, m, terms })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn tuple_size(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[JuntaTerm] {
        &self.terms
    }

    /// Keeps only the first `k` terms.
    pub fn truncated(&self, k: usize) -> JuntaIntersection {
        JuntaIntersection {
            terms: self.terms[..k.min(self.terms.len())].to_vec(),
            ..self.clone()
        }
    }

    pub fn virtual_facet_count(&self) -> FacetCount {
        if self.p == 1.0 {
            FacetCount::Finite {
                log2: (self.terms.len() as f64).log2() + self.m as f64,
            }
        } else {
            FacetCount::NotFinitelyFaceted
        }
    }

    /// Whether term `j` accepts `x`.
    #[inline]
    pub fn term_contains(&self, j: usize, x: &[f64]) -> bool {
        let t = &self.terms[j];
        let mut s = 0.0;
        if self.p == 1.0 {
            for &i in &t.indices {
                s += x[i].abs();
            }
        } else if self.p == 2.0 {
            for &i in &t.indices {
                s += x[i] * x[i];
            }
        } else {
            for &i in &t.indices {
                s += x[i].abs().powf(self.p);
            }
        }
        s <= t.theta
    }
}

impl Body for JuntaIntersection {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, x: &[f64]) -> bool {
        if self.p == 1.0 || self.p == 2.0 {
            return (0..self.terms.len()).all(|j| self.term_contains(j, x));
        }
        with_scratch(x.len(), |pw| {
            for (a, b) in pw.iter_mut().zip(x) {
                *a = b.abs().powf(self.p);
            }
            self.terms
                .iter()
                .all(|t| t.indices.iter().map(|&i| pw[i]).sum::<f64>() <= t.theta)
        })
    }
}

fn check_tuple(dim: usize, indices: &[usize]) -> Result<()> {
    let mut sorted = indices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::param("junta tuple has repeated indices"));
    }
    if sorted.last().is_some_and(|&i| i >= dim) {
        return Err(Error::param(format!("junta index out of range for dimension {dim}")));
    }
    Ok(())
}

/// Expands `sum_k |x_{i_k}| <= theta` into its `2^m` sign-pattern halfspaces.
pub fn l1_junta_to_polytope(dim: usize, indices: &[usize], theta: f64) -> Result<Polytope> {
    let m = indices.len();
    if m == 0 {
        return Err(Error::param("junta tuple is empty"));
    }
    if m > MATERIALIZATION_CAP {
        return Err(Error::Budget {
            what: "junta tuple size",
            requested: m as u128,
            cap: MATERIALIZATION_CAP as u128,
        });
    }
    if !(theta >= 0.0) {
        return Err(Error::param(format!("junta threshold must be nonnegative, got {theta}")));
    }
    check_tuple(dim, indices)?;
    let mut poly = Polytope::new(dim)?;
    let c = 1.0 / (m as f64).sqrt();
    let mut v = vec![0.0; dim];
    for pattern in 0u32..(1u32 << m) {
        for (k, &i) in indices.iter().enumerate() {
            v[i] = if pattern >> k & 1 == 1 { -c } else { c };
        }
        poly.push_unit(&v, theta * c);
    }
    Ok(poly)
}
