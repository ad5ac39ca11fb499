//! Convex influences.
//!
//! `Inf_v[K] = E[K(x)(1 - <x, v>^2)]` and `TInf[K] = E[K(x)(n - |x|^2)]`,
//! which equals the derivative of `Vol((1 + d) K)` at `d = 0`.

use crate::bodies::{dot, Body, Polytope};
use crate::error::{Error, Result};
use crate::estimate::{Estimate, Moments};
use crate::mc::{mean_of, means_of};
use crate::rng::RandomStream;
use serde::Serialize;
use std::f64::consts::SQRT_2;

fn warn_if_origin_outside<B: Body + ?Sized>(body: &B) {
    if !body.contains(&vec![0.0; body.dim()]) {
        log::warn!("influence requested for a body that does not contain the origin");
    }
}

fn check_unit(v: &[f64]) -> Result<()> {
    let len = dot(v, v).sqrt();
    if (len - 1.0).abs() > 1e-9 {
        return Err(Error::param(format!("direction must be a unit vector, |v| = {len}")));
    }
    Ok(())
}

/// `E[K(x)(n - |x|^2)]`.
pub fn estimate_total_influence<B: Body + ?Sized>(body: &B, n_samples: u64, stream: &RandomStream) -> Estimate {
    warn_if_origin_outside(body);
    let n = body.dim() as f64;
    mean_of(body.dim(), n_samples, stream, |x| {
        if body.contains(x) {
            n - dot(x, x)
        } else {
            0.0
        }
    })
}

/// `E[K(x)(1 - <x, v>^2)]` for unit `v`.
pub fn estimate_directional_influence<B: Body + ?Sized>(
    body: &B,
    v: &[f64],
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Estimate> {
    crate::error::check_dim(body.dim(), v.len())?;
    check_unit(v)?;
    warn_if_origin_outside(body);
    Ok(mean_of(body.dim(), n_samples, stream, |x| {
        if body.contains(x) {
            let t = dot(x, v);
            1.0 - t * t
        } else {
            0.0
        }
    }))
}

/// Total influence as `-sqrt(2) sum_i K~(2 e_i)`, from the level-two diagonal
/// Hermite coefficients on shared probes.
pub fn estimate_total_influence_hermite<B: Body + ?Sized>(
    body: &B,
    n_samples: u64,
    stream: &RandomStream,
) -> Estimate {
    warn_if_origin_outside(body);
    mean_of(body.dim(), n_samples, stream, |x| {
        if body.contains(x) {
            -SQRT_2 * x.iter().map(|&t| (t * t - 1.0) / SQRT_2).sum::<f64>()
        } else {
            0.0
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DilationScheme {
    /// `(Vol((1+d)K) - Vol(K)) / d`, bias `O(d)`.
    Forward,
    /// `2 Q(d/2) - Q(d)`, bias `O(d^2)`.
    Richardson,
}

/// Forward-difference dilation quotient with common random numbers.
pub fn estimate_influence_dilation<B: Body + ?Sized>(
    body: &B,
    delta_step: f64,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Estimate> {
    estimate_influence_dilation_with(body, delta_step, DilationScheme::Forward, n_samples, stream)
}

pub fn estimate_influence_dilation_with<B: Body + ?Sized>(
    body: &B,
    delta_step: f64,
    scheme: DilationScheme,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Estimate> {
    if !(delta_step > 0.0 && delta_step <= 0.2) {
        return Err(Error::param(format!("dilation step must lie in (0, 0.2], got {delta_step}")));
    }
    warn_if_origin_outside(body);
    let dim = body.dim();
    let inside_scaled = |x: &[f64], s: f64, buf: &mut Vec<f64>| {
        buf.clear();
        buf.extend(x.iter().map(|v| v / s));
        body.contains(buf) as i32 as f64
    };
    let d = delta_step;
    Ok(mean_of(dim, n_samples, stream, move |x| {
        let mut buf = Vec::with_capacity(dim);
        let base = body.contains(x) as i32 as f64;
        let full = (inside_scaled(x, 1.0 + d, &mut buf) - base) / d;
        match scheme {
            DilationScheme::Forward => full,
            DilationScheme::Richardson => {
                let half = (inside_scaled(x, 1.0 + d / 2.0, &mut buf) - base) / (d / 2.0);
                2.0 * half - full
            }
        }
    }))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoppanaReport {
    pub tinf: Estimate,
    pub facets: usize,
    /// `7 ln(facets)`.
    pub bound: f64,
    pub holds: bool,
}

/// Checks `TInf[K] < 7 ln s` for a polytope with `s >= 3` facets containing the origin.
pub fn boppana_check(polytope: &Polytope, n_samples: u64, stream: &RandomStream) -> Result<BoppanaReport> {
    let s = polytope.facet_count();
    if s < 3 {
        return Err(Error::Precondition(format!("need at least 3 facets, got {s}")));
    }
    if !polytope.contains_origin() {
        return Err(Error::Precondition("polytope does not contain the origin".into()));
    }
    let tinf = estimate_total_influence(polytope, n_samples, stream);
    let bound = 7.0 * (s as f64).ln();
    Ok(BoppanaReport {
        tinf,
        facets: s,
        bound,
        holds: tinf.value - 3.0 * tinf.stderr < bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InfluenceProfile {
    pub threshold: f64,
    /// `Inf_{e_i}` for every coordinate, on shared probes.
    pub influences: Vec<Estimate>,
    pub fraction: f64,
}

/// Fraction of coordinate directions whose influence point estimate reaches `threshold`.
pub fn influential_direction_fraction<B: Body + ?Sized>(
    body: &B,
    threshold: f64,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<InfluenceProfile> {
    if !(threshold > 0.0) {
        return Err(Error::param(format!("threshold must be positive, got {threshold}")));
    }
    warn_if_origin_outside(body);
    let n = body.dim();
    let ms: Vec<Moments> = means_of(n, n, n_samples, stream, |x, out| {
        if body.contains(x) {
            for (o, &t) in out.iter_mut().zip(x) {
                *o = 1.0 - t * t;
            }
        } else {
            out.fill(0.0);
        }
    });
    let influences: Vec<Estimate> = ms.iter().map(Estimate::from_moments).collect();
    let hits = influences.iter().filter(|e| e.value >= threshold).count();
    Ok(InfluenceProfile {
        threshold,
        fraction: hits as f64 / n as f64,
        influences,
    })
}
