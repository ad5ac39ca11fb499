use super::{dot, norm, Body};
use crate::error::{check_dim, Error, Result};
use serde::{Deserialize, Serialize};

/// `{x : <x, normal> <= threshold}` with a unit normal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    normal: Vec<f64>,
    threshold: f64,
}

impl Halfspace {
    /// Normalises `normal` and rescales `threshold` so the set is unchanged.
    pub fn new(normal: Vec<f64>, threshold: f64) -> Result<Self> {
        if normal.is_empty() {
            return Err(Error::InvalidDimension(0));
        }
        let len = norm(&normal);
        if !(len > 0.0 && len.is_finite()) || threshold.is_nan() {
            return Err(Error::param("halfspace normal must be finite and nonzero"));
        }
        if (len - 1.0).abs() <= 1e-12 {
            return Ok(Halfspace { normal, threshold });
        }
        Ok(Halfspace {
            normal: normal.iter().map(|x| x / len).collect(),
            threshold: threshold / len,
        })
    }

    pub fn normal(&self) -> &[f64] {
        &self.normal
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

impl Body for Halfspace {
    fn dim(&self) -> usize {
        self.normal.len()
    }

    fn contains(&self, x: &[f64]) -> bool {
        dot(&self.normal, x) <= self.threshold
    }

    fn support(&self, v: &[f64]) -> Option<f64> {
        Some(if 1.0 - dot(&self.normal, v) <= 1e-12 {
            self.threshold
        } else {
            f64::INFINITY
        })
    }

    fn has_support(&self) -> bool {
        true
    }
}

/// Intersection of halfspaces, stored as a flat row-major normal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    dim: usize,
    normals: Vec<f64>,
    thresholds: Vec<f64>,
}

impl Polytope {
    /// The empty intersection (all of `R^dim`).
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Polytope {
            dim,
            normals: Vec::new(),
            thresholds: Vec::new(),
        })
    }

    pub fn from_halfspaces(dim: usize, halfspaces: impl IntoIterator<Item = Halfspace>) -> Result<Self> {
        let mut p = Polytope::new(dim)?;
        for h in halfspaces {
            p.push(h)?;
        }
        Ok(p)
    }

    pub fn push(&mut self, h: Halfspace) -> Result<()> {
        check_dim(self.dim, h.normal.len())?;
        self.normals.extend_from_slice(&h.normal);
        self.thresholds.push(h.threshold);
        Ok(())
    }

    /// Adds a halfspace whose normal is already unit length.
    pub(crate) fn push_unit(&mut self, normal: &[f64], threshold: f64) {
        debug_assert_eq!(normal.len(), self.dim);
        self.normals.extend_from_slice(normal);
        self.thresholds.push(threshold);
    }

    pub fn facet_count(&self) -> usize {
        self.thresholds.len()
    }

    pub fn contains_origin(&self) -> bool {
        self.thresholds.iter().all(|&t| t >= 0.0)
    }

    pub fn normal(&self, i: usize) -> &[f64] {
        &self.normals[i * self.dim..(i + 1) * self.dim]
    }

    pub fn threshold(&self, i: usize) -> f64 {
        self.thresholds[i]
    }

    pub fn halfspace(&self, i: usize) -> Halfspace {
        Halfspace {
            normal: self.normal(i).to_vec(),
            threshold: self.thresholds[i],
        }
    }

    pub fn halfspaces(&self) -> impl Iterator<Item = Halfspace> + '_ {
        (0..self.facet_count()).map(|i| self.halfspace(i))
    }

    /// Minkowski gauge `max_i <x, v_i> / theta_i`, for polytopes whose
    /// thresholds are all positive. `x` lies in `s K` iff `gauge(x) <= s`.
    pub fn gauge(&self, x: &[f64]) -> f64 {
        let mut g = 0.0f64;
        for (row, &t) in self.normals.chunks_exact(self.dim).zip(&self.thresholds) {
            g = g.max(dot(row, x) / t);
        }
        g
    }

    /// `s K`: thresholds multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Polytope> {
        if !(s > 0.0) {
            return Err(Error::param(format!("scale must be positive, got {s}")));
        }
        Ok(Polytope {
            thresholds: self.thresholds.iter().map(|t| t * s).collect(),
            ..self.clone()
        })
    }

    /// Same facets in the order given by `perm`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Polytope> {
        let mut seen = vec![false; self.facet_count()];
        if perm.len() != seen.len() {
            return Err(Error::param("permutation length differs from facet count"));
        }
        let mut p = Polytope::new(self.dim)?;
        for &i in perm {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::param("not a permutation"));
            }
            p.push_unit(self.normal(i), self.thresholds[i]);
        }
        Ok(p)
    }
}

impl Body for Polytope {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, x: &[f64]) -> bool {
        self.normals
            .chunks_exact(self.dim)
            .zip(&self.thresholds)
            .all(|(row, &t)| dot(row, x) <= t)
    }
}

/// `{x : |<x, v>| <= theta}` as two halfspaces.
pub fn symmetric_slab(v: &[f64], theta: f64) -> Result<Polytope> {
    if !(theta >= 0.0) {
        return Err(Error::param(format!("slab half-width must be nonnegative, got {theta}")));
    }
    let h = Halfspace::new(v.to_vec(), theta)?;
    let neg = Halfspace::new(h.normal.iter().map(|x| -x).collect(), h.threshold)?;
    Polytope::from_halfspaces(v.len(), [h, neg])
}

/// Concatenates facet lists.
pub fn intersect_polytopes(parts: &[Polytope]) -> Result<Polytope> {
    let first = parts
        .first()
        .ok_or_else(|| Error::param("cannot intersect an empty list"))?;
    let mut out = Polytope::new(first.dim)?;
    for p in parts {
        check_dim(first.dim, p.dim)?;
        out.normals.extend_from_slice(&p.normals);
        out.thresholds.extend_from_slice(&p.thresholds);
    }
    Ok(out)
}
