//! Outer approximators built from supporting halfspaces.
//!
//! For each candidate direction `v` the ray tail mass `m(l(v))` is the Gaussian
//! mass beyond the support value. Directions whose mass is already below
//! `eps * delta / 4` are dropped, the rest are grouped into geometric buckets
//! `m in ((1+tau)^{-k}, (1+tau)^{-k+1}]`, each bucket is thinned to a covering
//! subset, and every kept direction contributes `{x : <x, v> <= l(v)}`.

use super::net::{directions_for, greedy_cover, DirectionMode};
use crate::bodies::{Body, Polytope};
use crate::error::{Error, Result};
use crate::optim::bisect;
use crate::rng::RandomStream;
use crate::special::tail_m;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangentConfig {
    pub eps: f64,
    pub delta_estimate: f64,
    pub tau: f64,
    pub k_star: u64,
    pub theta_star: f64,
    pub direction_mode: DirectionMode,
    /// Random mode: number of directions. Net mode: cap on candidate directions.
    pub direction_budget: usize,
    /// Directions always added to the candidate set.
    pub extra_directions: Vec<Vec<f64>>,
}

fn check_eps_delta(eps: f64, delta: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::param(format!("delta estimate must lie in (0, 0.5), got {delta}")));
    }
    Ok(())
}

impl TangentConfig {
    /// Bucket width `tau = eps delta / 8` and bucket count
    /// `k* = ceil(ln(4/(eps delta)) / tau)` with an explicit net angle.
    pub fn with_angle(
        eps: f64,
        delta_estimate: f64,
        theta_star: f64,
        direction_mode: DirectionMode,
        direction_budget: usize,
    ) -> Result<Self> {
        check_eps_delta(eps, delta_estimate)?;
        if !(theta_star > 0.0 && theta_star < FRAC_PI_2) {
            return Err(Error::param(format!("net angle must lie in (0, pi/2), got {theta_star}")));
        }
        let ed = eps * delta_estimate;
        let tau = ed / 8.0;
        Ok(TangentConfig {
            eps,
            delta_estimate,
            tau,
            k_star: ((4.0 / ed).ln() / tau).ceil() as u64,
            theta_star,
            direction_mode,
            direction_budget,
            extra_directions: Vec::new(),
        })
    }

    /// Net angle from the worst-case error analysis:
    /// `theta* = (eps^2/64) / (R (2 + 16/eps) (2 R^2 (2 + 16/eps) - n/4))`
    /// with `R = sqrt(n) + 2 sqrt(ln(2/(eps delta)))`.
    pub fn analytic(
        n: usize,
        eps: f64,
        delta_estimate: f64,
        direction_mode: DirectionMode,
        direction_budget: usize,
    ) -> Result<Self> {
        check_eps_delta(eps, delta_estimate)?;
        let theta = analytic_theta_star(n, eps, delta_estimate);
        Self::with_angle(eps, delta_estimate, theta, direction_mode, direction_budget)
    }

    /// Net angle `ray_error_angle(r, n, eps)` for a body whose support values
    /// are all close to `r` (e.g. a ball).
    pub fn for_radius(
        n: usize,
        r: f64,
        eps: f64,
        delta_estimate: f64,
        direction_mode: DirectionMode,
        direction_budget: usize,
    ) -> Result<Self> {
        let theta = ray_error_angle(r, n, eps)?;
        Self::with_angle(eps, delta_estimate, theta, direction_mode, direction_budget)
    }
}

pub fn analytic_theta_star(n: usize, eps: f64, delta: f64) -> f64 {
    let nf = n as f64;
    let r = nf.sqrt() + 2.0 * (2.0 / (eps * delta)).ln().sqrt();
    let k = 2.0 + 16.0 / eps;
    (eps * eps / 64.0) / (r * k * (2.0 * r * r * k - nf / 4.0))
}

/// Largest angle `a` in `(0, pi/2)` with `m(l / cos a) >= (1 - eps/2) m(l)`:
/// tilting a supporting hyperplane at distance `l` by up to `a` loses at most
/// an `eps/2` fraction of the ray tail mass.
pub fn ray_error_angle(ell: f64, n: usize, eps: f64) -> Result<f64> {
    if !(ell > 0.0 && ell.is_finite()) || !(eps > 0.0 && eps < 2.0) {
        return Err(Error::param(format!("ray error angle needs l > 0 and eps in (0, 2), got l={ell}, eps={eps}")));
    }
    let base = tail_m(ell, n)?;
    let goal = (1.0 - eps / 2.0) * base;
    let f = |a: f64| tail_m(ell / a.cos(), n).unwrap_or(0.0) - goal;
    bisect(f, 0.0, FRAC_PI_2 - 1e-9, 0.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct TangentApproximation {
    #[serde(skip)]
    pub polytope: Polytope,
    pub candidates: usize,
    /// Directions dropped because their ray tail mass was already small.
    pub discarded_small_tail: usize,
    /// Kept facets per bucket index.
    pub bucket_sizes: BTreeMap<u64, usize>,
}

/// Bucket `k >= 1` with `m in ((1+tau)^{-k}, (1+tau)^{-k+1}]`.
pub(crate) fn bucket_index(m: f64, tau: f64) -> u64 {
    let k = ((-m.ln()) / tau.ln_1p()).floor() as u64 + 1;
    // Guard the half-open boundary against rounding.
    let lo = |k: u64| (-(k as f64) * tau.ln_1p()).exp();
    if m <= lo(k) {
        k + 1
    } else if k > 1 && m > lo(k - 1) {
        k - 1
    } else {
        k
    }
}

pub fn tangent_approximator<B: Body + ?Sized>(
    body: &B,
    config: &TangentConfig,
    stream: &mut RandomStream,
) -> Result<TangentApproximation> {
    if !body.has_support() {
        return Err(Error::Capability("support functional"));
    }
    let n = body.dim();
    check_eps_delta(config.eps, config.delta_estimate)?;
    let fine = config.theta_star / 4.0;
    let mut dirs = directions_for(n, config.direction_mode, fine, config.direction_budget, stream)?;
    for v in &config.extra_directions {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        dirs.push(v.iter().map(|x| x / len).collect());
    }
    let good = config.eps * config.delta_estimate / 4.0;
    let mut buckets: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let mut support = vec![0.0; dirs.len()];
    let mut discarded = 0;
    for (i, v) in dirs.iter().enumerate() {
        let ell = body.support(v).ok_or(Error::Capability("support functional"))?;
        support[i] = ell;
        let m = if ell <= 0.0 {
            1.0
        } else if ell.is_infinite() {
            0.0
        } else {
            tail_m(ell, n)?
        };
        if m <= good {
            discarded += 1;
            continue;
        }
        let k = bucket_index(m, config.tau);
        if k > config.k_star {
            discarded += 1;
            continue;
        }
        buckets.entry(k).or_default().push(i);
    }
    let mut poly = Polytope::new(n)?;
    let mut bucket_sizes = BTreeMap::new();
    for (k, members) in &buckets {
        let kept = match config.direction_mode {
            DirectionMode::DeterministicNet => greedy_cover(&dirs, members, config.theta_star - fine),
            DirectionMode::RandomDirections => members.clone(),
        };
        for &i in &kept {
            poly.push_unit(&dirs[i], support[i]);
        }
        bucket_sizes.insert(*k, kept.len());
    }
    Ok(TangentApproximation {
        polytope: poly,
        candidates: dirs.len(),
        discarded_small_tail: discarded,
        bucket_sizes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Halfspace, LpBall};

    #[test]
    fn config_arithmetic() {
        let c = TangentConfig::with_angle(0.2, 0.1, 0.1, DirectionMode::DeterministicNet, 100).unwrap();
        assert!((c.tau - 0.0025).abs() < 1e-15);
        assert_eq!(c.k_star, ((200.0f64).ln() / 0.0025).ceil() as u64);
        assert!(TangentConfig::with_angle(0.2, 0.5, 0.1, DirectionMode::DeterministicNet, 100).is_err());
        let a = TangentConfig::analytic(2, 0.2, 0.1, DirectionMode::DeterministicNet, 100).unwrap();
        assert!(a.theta_star > 0.0 && a.theta_star < 1e-6);
    }

    #[test]
    fn buckets_are_half_open() {
        let tau: f64 = 0.01;
        for k in 1..200u64 {
            let top = (-((k - 1) as f64) * tau.ln_1p()).exp();
            assert_eq!(bucket_index(top, tau), k);
            let inner = top * 0.999_9;
            assert_eq!(bucket_index(inner, tau), k);
        }
        assert_eq!(bucket_index(1.0, tau), 1);
    }

    #[test]
    fn ray_angle_is_tight() {
        let r = 2.145_966_026_289_347;
        let a = ray_error_angle(r, 2, 0.2).unwrap();
        let lost = 1.0 - tail_m(r / a.cos(), 2).unwrap() / tail_m(r, 2).unwrap();
        assert!((lost - 0.1).abs() < 1e-9);
        assert!((a - 0.2106).abs() < 1e-3);
    }

    #[test]
    fn needs_support() {
        struct Blob;
        impl Body for Blob {
            fn dim(&self) -> usize {
                2
            }
            fn contains(&self, x: &[f64]) -> bool {
                x[0] < 1.0
            }
        }
        let c = TangentConfig::with_angle(0.2, 0.1, 0.3, DirectionMode::DeterministicNet, 1000).unwrap();
        let mut s = RandomStream::new(0, 0);
        assert_eq!(
            tangent_approximator(&Blob, &c, &mut s).unwrap_err(),
            Error::Capability("support functional")
        );
    }

    #[test]
    fn paper_angle_exceeds_budget() {
        let disk = LpBall::euclidean(2, 2.0).unwrap();
        let c = TangentConfig::analytic(2, 0.2, 0.1, DirectionMode::DeterministicNet, 1_000_000).unwrap();
        let mut s = RandomStream::new(0, 0);
        assert!(matches!(tangent_approximator(&disk, &c, &mut s), Err(Error::Budget { .. })));
    }

    #[test]
    fn halfspace_facing_direction_kept() {
        let h = Halfspace::new(vec![1.0, 0.0], 1.0).unwrap();
        let mut c = TangentConfig::with_angle(0.2, 0.16, 0.3, DirectionMode::DeterministicNet, 10_000).unwrap();
        c.extra_directions.push(vec![1.0, 0.0]);
        let mut s = RandomStream::new(0, 0);
        let t = tangent_approximator(&h, &c, &mut s).unwrap();
        assert_eq!(t.polytope.facet_count(), 1);
        assert_eq!(t.polytope.normal(0), &[1.0, 0.0]);
        assert_eq!(t.polytope.threshold(0), 1.0);
    }
}
