//! Random-zoom variance profiles.
//!
//! For an anchor `X` the zoom is `y -> K(sqrt(1 - lambda) X + sqrt(lambda) y)`.
//! With `f = 2K - 1`, `E_X Var_y[f zoom] = 2 GNS_{lambda/2}[K]`.

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::estimate::{Estimate, Moments};
use crate::rng::RandomStream;
use rayon::prelude::*;
use serde::Serialize;

/// Order-statistic levels reported in [`ZoomProfile::quantiles`].
pub const QUANTILE_LEVELS: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

#[derive(Clone, Debug, Serialize)]
pub struct ZoomProfile {
    pub lambda: f64,
    pub anchor_count: usize,
    pub inner_count: usize,
    /// `4 v (1 - v)` per anchor, `v` the inner volume estimate.
    pub per_anchor_variance: Vec<f64>,
    /// Mean over anchors of `n_inner / (n_inner - 1) * 4 v (1 - v)`.
    pub mean_variance: Estimate,
    /// `(level, value)` pairs of the per-anchor variance distribution.
    pub quantiles: Vec<(f64, f64)>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let k = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
    sorted[k]
}

/// Inner volume estimate for anchor `a`, drawing the anchor and the inner
/// probes from `stream.substream(a)`.
fn anchor_volume<B: Body + ?Sized>(body: &B, lambda: f64, n_inner: usize, stream: &RandomStream, a: u64) -> f64 {
    let dim = body.dim();
    let mut s = stream.substream(a);
    let mut x = vec![0.0; dim];
    s.fill_normals(&mut x);
    let (ca, cb) = ((1.0 - lambda).sqrt(), lambda.sqrt());
    x.iter_mut().for_each(|v| *v *= ca);
    let (mut y, mut z) = (vec![0.0; dim], vec![0.0; dim]);
    let mut hits = 0usize;
    for _ in 0..n_inner {
        s.fill_normals(&mut y);
        for ((zi, xi), yi) in z.iter_mut().zip(&x).zip(&y) {
            *zi = xi + cb * yi;
        }
        hits += body.contains(&z) as usize;
    }
    hits as f64 / n_inner as f64
}

pub fn zoom_variance_profile<B: Body + ?Sized>(
    body: &B,
    lambda: f64,
    n_anchors: usize,
    n_inner: usize,
    stream: &RandomStream,
) -> Result<ZoomProfile> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::param(format!("zoom lambda must lie in [0, 1], got {lambda}")));
    }
    if n_anchors < 2 || n_inner < 2 {
        return Err(Error::param("zoom profile needs at least 2 anchors and 2 inner probes"));
    }
    let vols: Vec<f64> = (0..n_anchors as u64)
        .into_par_iter()
        .map(|a| anchor_volume(body, lambda, n_inner, stream, a))
        .collect();
    let per_anchor_variance: Vec<f64> = vols.iter().map(|v| 4.0 * v * (1.0 - v)).collect();
    let corr = n_inner as f64 / (n_inner as f64 - 1.0);
    let mut m = Moments::new();
    per_anchor_variance.iter().for_each(|v| m.push(v * corr));
    let mut sorted = per_anchor_variance.clone();
    sorted.sort_by(f64::total_cmp);
    Ok(ZoomProfile {
        lambda,
        anchor_count: n_anchors,
        inner_count: n_inner,
        quantiles: QUANTILE_LEVELS.iter().map(|&q| (q, quantile(&sorted, q))).collect(),
        mean_variance: Estimate::from_moments(&m),
        per_anchor_variance,
    })
}

/// Fraction of anchors whose zoom variance is at least each threshold.
pub fn zoom_collapse_experiment<B: Body + ?Sized>(
    body: &B,
    lambda: f64,
    thresholds: &[f64],
    n_anchors: usize,
    n_inner: usize,
    stream: &RandomStream,
) -> Result<Vec<f64>> {
    let prof = zoom_variance_profile(body, lambda, n_anchors, n_inner, stream)?;
    Ok(thresholds
        .iter()
        .map(|&t| {
            prof.per_anchor_variance.iter().filter(|&&v| v >= t).count() as f64 / n_anchors as f64
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseCurve {
    pub lambdas: Vec<f64>,
    pub thresholds: Vec<f64>,
    /// `exceedance[i][j]`: fraction at `lambdas[i]`, `thresholds[j]`.
    pub exceedance: Vec<Vec<f64>>,
    /// Whether, for every threshold, exceedance does not increase as lambda decreases.
    pub monotone: bool,
}

/// Runs [`zoom_collapse_experiment`] over several lambdas (sorted in decreasing order).
pub fn zoom_collapse_curve<B: Body + ?Sized>(
    body: &B,
    lambdas: &[f64],
    thresholds: &[f64],
    n_anchors: usize,
    n_inner: usize,
    stream: &RandomStream,
) -> Result<CollapseCurve> {
    let mut lambdas = lambdas.to_vec();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let exceedance = lambdas
        .iter()
        .map(|&l| zoom_collapse_experiment(body, l, thresholds, n_anchors, n_inner, stream))
        .collect::<Result<Vec<_>>>()?;
    let monotone = (0..thresholds.len()).all(|j| exceedance.windows(2).all(|w| w[1][j] <= w[0][j]));
    Ok(CollapseCurve {
        lambdas,
        thresholds: thresholds.to_vec(),
        exceedance,
        monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Halfspace, LpBall};
    use crate::estimators::{estimate_gns, estimate_volume};

    #[test]
    fn constant_zoom_has_no_variance() {
        let b = LpBall::euclidean(4, 2.0).unwrap();
        let p = zoom_variance_profile(&b, 0.0, 200, 50, &RandomStream::new(0, 0)).unwrap();
        assert!(p.per_anchor_variance.iter().all(|&v| v == 0.0));
        let e = zoom_collapse_experiment(&b, 0.0, &[0.1, 0.5, 0.9], 200, 50, &RandomStream::new(0, 0)).unwrap();
        assert_eq!(e, vec![0.0; 3]);
        assert!(zoom_variance_profile(&b, 1.5, 10, 10, &RandomStream::new(0, 0)).is_err());
    }

    #[test]
    fn identity_zoom_matches_volume() {
        let b = LpBall::euclidean(4, 2.0).unwrap();
        let s = RandomStream::new(1, 0);
        let p = zoom_variance_profile(&b, 1.0, 400, 2000, &s).unwrap();
        let v = estimate_volume(&b, 1_000_000, &s.substream(1 << 40)).value;
        assert!(p.mean_variance.within(4.0 * v * (1.0 - v), 3.0), "{:?}", p.mean_variance);
        assert!(p.per_anchor_variance.iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn mean_variance_is_twice_gns() {
        let b = LpBall::euclidean(16, 4.0).unwrap();
        let s = RandomStream::new(2, 0);
        let p = zoom_variance_profile(&b, 0.3, 500, 500, &s).unwrap();
        let g = estimate_gns(&b, 0.15, 1_000_000, &s.substream(1 << 40)).unwrap();
        assert!(p.mean_variance.agrees_with(&g.scaled(2.0), 3.0, 0.0));
    }

    #[test]
    fn boundary_halfspace_stays_in_range() {
        let h = Halfspace::new(vec![1.0; 4], 0.0).unwrap();
        let e = zoom_collapse_experiment(&h, 0.05, &[0.9], 300, 100, &RandomStream::new(3, 0)).unwrap();
        assert!((0.0..=1.0).contains(&e[0]));
    }
}
