//! Gaussian volume and Gaussian distance.

use crate::bodies::{Body, Polytope};
use crate::error::{check_dim, Error, Result};
use crate::estimate::Estimate;
use crate::mc::{map_chunks, proportion_of};
use crate::rng::RandomStream;

/// `Pr[x in K]` for standard normal `x`.
pub fn estimate_volume<B: Body + ?Sized>(body: &B, n_samples: u64, stream: &RandomStream) -> Estimate {
    proportion_of(body.dim(), n_samples.max(1), stream, |x| body.contains(x))
}

/// Gaussian measure of the symmetric difference, on shared probes.
pub fn estimate_distance<A: Body + ?Sized, B: Body + ?Sized>(
    a: &A,
    b: &B,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Estimate> {
    check_dim(a.dim(), b.dim())?;
    Ok(proportion_of(a.dim(), n_samples.max(1), stream, |x| {
        a.contains(x) != b.contains(x)
    }))
}

/// Probes summarised by the Minkowski gauge of a polytope and target membership,
/// so `dist(target, s * P)` can be evaluated for many scales `s` on the same probes.
#[derive(Clone, Debug)]
pub struct GaugeProfile {
    gauges: Vec<f64>,
    inside_target: Vec<bool>,
}

impl GaugeProfile {
    pub fn new<B: Body + ?Sized>(
        polytope: &Polytope,
        target: &B,
        n_samples: u64,
        stream: &RandomStream,
    ) -> Result<Self> {
        check_dim(polytope.dim(), target.dim())?;
        if !polytope.thresholds_positive() {
            return Err(Error::Precondition("gauge profile needs positive thresholds".into()));
        }
        let dim = polytope.dim();
        let parts = map_chunks(n_samples, stream, |mut s, len| {
            let mut x = vec![0.0; dim];
            let mut g = Vec::with_capacity(len);
            let mut t = Vec::with_capacity(len);
            for _ in 0..len {
                s.fill_normals(&mut x);
                g.push(polytope.gauge(&x));
                t.push(target.contains(&x));
            }
            (g, t)
        });
        let (mut gauges, mut inside_target) = (Vec::new(), Vec::new());
        for (g, t) in parts {
            gauges.extend(g);
            inside_target.extend(t);
        }
        Ok(GaugeProfile { gauges, inside_target })
    }

    /// `dist(target, scale * P)` on the stored probes.
    pub fn distance_at(&self, scale: f64) -> Estimate {
        let miss = self
            .gauges
            .iter()
            .zip(&self.inside_target)
            .filter(|(&g, &t)| (g <= scale) != t)
            .count();
        Estimate::bernoulli(miss as u64, self.gauges.len() as u64)
    }
}

impl Polytope {
    pub(crate) fn thresholds_positive(&self) -> bool {
        (0..self.facet_count()).all(|i| self.threshold(i) > 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Halfspace, WholeSpace};
    use crate::special::phi_cdf;

    #[test]
    fn whole_space_has_volume_one() {
        let e = estimate_volume(&WholeSpace { dim: 4 }, 10_000, &RandomStream::new(0, 0));
        assert_eq!(e.value, 1.0);
    }

    #[test]
    fn halfspace_volume() {
        let h = Halfspace::new(vec![1.0, 0.0, 0.0], 0.7).unwrap();
        let e = estimate_volume(&h, 1_000_000, &RandomStream::new(1, 0));
        assert!(e.within(phi_cdf(0.7), 3.0));
        assert!((phi_cdf(0.7) - 0.758_036_347_776_927).abs() < 1e-12);
    }

    #[test]
    fn distance_basics() {
        let a = Halfspace::new(vec![1.0, 0.0], 0.0).unwrap();
        let b = Halfspace::new(vec![1.0, 0.0], 0.5).unwrap();
        let s = RandomStream::new(2, 0);
        assert_eq!(estimate_distance(&a, &a, 10_000, &s).unwrap().value, 0.0);
        let d = estimate_distance(&a, &b, 1_000_000, &s).unwrap();
        assert!(d.within(0.191_462_461_274_013_1, 3.0));
        let c = Halfspace::new(vec![1.0, 0.0, 0.0], 0.5).unwrap();
        assert!(estimate_distance(&a, &c, 10, &s).is_err());
    }

    #[test]
    fn gauge_profile_matches_direct_distance() {
        let mut p = Polytope::new(2).unwrap();
        p.push(Halfspace::new(vec![1.0, 0.2], 1.0).unwrap()).unwrap();
        p.push(Halfspace::new(vec![-0.3, 1.0], 1.0).unwrap()).unwrap();
        p.push(Halfspace::new(vec![-1.0, -1.0], 1.0).unwrap()).unwrap();
        let target = crate::bodies::LpBall::euclidean(2, 1.3).unwrap();
        let s = RandomStream::new(3, 0);
        let prof = GaugeProfile::new(&p, &target, 50_000, &s).unwrap();
        for scale in [0.5, 1.0, 1.7] {
            let direct = estimate_distance(&target, &p.scaled(scale).unwrap(), 50_000, &s).unwrap();
            assert_eq!(prof.distance_at(scale).value, direct.value);
        }
    }
}
