//! Gaussian noise sensitivity and stability.
//!
//! `GNS_rho[K] = Pr[K(z) != K(z')]` for `(1 - 2 rho)`-correlated `z, z'`;
//! `Stab_r[f] = E[f(z) f(z')]` for `r`-correlated pairs and `f = 2K - 1`.
//! The two satisfy `GNS_rho = 1/2 - Stab_{1 - 2 rho} / 2`.

use crate::bodies::Body;
use crate::error::{Error, Result};
use crate::estimate::{Estimate, Moments};
use crate::mc::map_chunks;
use crate::rng::RandomStream;
use std::f64::consts::PI;

fn pair_kernel<B: Body + ?Sized, F>(body: &B, n_samples: u64, stream: &RandomStream, corr: f64, f: F) -> Moments
where
    F: Fn(bool, bool) -> f64 + Sync + Send,
{
    let dim = body.dim();
    let c = (1.0 - corr * corr).max(0.0).sqrt();
    let parts = map_chunks(n_samples, stream, |mut s, len| {
        let (mut z, mut g) = (vec![0.0; dim], vec![0.0; dim]);
        let mut m = Moments::new();
        for _ in 0..len {
            s.fill_normals(&mut z);
            s.fill_normals(&mut g);
            for (gi, zi) in g.iter_mut().zip(&z) {
                *gi = corr * zi + c * *gi;
            }
            m.push(f(body.contains(&z), body.contains(&g)));
        }
        m
    });
    let mut total = Moments::new();
    parts.iter().for_each(|p| total.merge(p));
    total
}

/// `Pr[K(z) != K(z')]` with correlation `1 - 2 rho`, `rho` in `[0, 1/2]`.
pub fn estimate_gns<B: Body + ?Sized>(body: &B, rho: f64, n_samples: u64, stream: &RandomStream) -> Result<Estimate> {
    if !(0.0..=0.5).contains(&rho) {
        return Err(Error::param(format!("noise rate must lie in [0, 1/2], got {rho}")));
    }
    let m = pair_kernel(body, n_samples.max(1), stream, 1.0 - 2.0 * rho, |a, b| (a != b) as i32 as f64);
    let hits = (m.mean() * m.count() as f64).round() as u64;
    Ok(Estimate::bernoulli(hits, m.count()))
}

/// `E[f(z) f(z')]` with `f = 2K - 1` and correlation `rho_corr` in `[-1, 1]`.
pub fn estimate_stability<B: Body + ?Sized>(
    body: &B,
    rho_corr: f64,
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Estimate> {
    if !(-1.0..=1.0).contains(&rho_corr) {
        return Err(Error::param(format!("correlation must lie in [-1, 1], got {rho_corr}")));
    }
    let m = pair_kernel(body, n_samples.max(1), stream, rho_corr, |a, b| if a == b { 1.0 } else { -1.0 });
    Ok(Estimate::from_moments(&m))
}

/// `1/2 - Stab / 2`.
pub fn gns_from_stability(stab: &Estimate) -> Estimate {
    stab.affine(0.5, -0.5)
}

/// Noise sensitivity of a halfspace through the origin: `arccos(1 - 2 rho) / pi`.
pub fn sheppard_gns(rho: f64) -> f64 {
    (1.0 - 2.0 * rho).acos() / PI
}

/// GNS at several noise rates on the same `(z, g)` draws,
/// with `z' = (1 - 2 rho) z + sqrt(1 - (1 - 2 rho)^2) g`.
pub fn estimate_gns_curve<B: Body + ?Sized>(
    body: &B,
    rhos: &[f64],
    n_samples: u64,
    stream: &RandomStream,
) -> Result<Vec<Estimate>> {
    if let Some(r) = rhos.iter().find(|r| !(0.0..=0.5).contains(*r)) {
        return Err(Error::param(format!("noise rate must lie in [0, 1/2], got {r}")));
    }
    let dim = body.dim();
    let coefs: Vec<(f64, f64)> = rhos
        .iter()
        .map(|r| {
            let c = 1.0 - 2.0 * r;
            (c, (1.0 - c * c).max(0.0).sqrt())
        })
        .collect();
    let n = n_samples.max(1);
    let parts = map_chunks(n, stream, |mut s, len| {
        let (mut z, mut g, mut zp) = (vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]);
        let mut hits = vec![0u64; coefs.len()];
        for _ in 0..len {
            s.fill_normals(&mut z);
            s.fill_normals(&mut g);
            let kz = body.contains(&z);
            for (h, &(a, b)) in hits.iter_mut().zip(&coefs) {
                for ((p, zi), gi) in zp.iter_mut().zip(&z).zip(&g) {
                    *p = a * zi + b * gi;
                }
                *h += (body.contains(&zp) != kz) as u64;
            }
        }
        hits
    });
    let mut total = vec![0u64; coefs.len()];
    for p in parts {
        total.iter_mut().zip(p).for_each(|(t, h)| *t += h);
    }
    Ok(total.into_iter().map(|h| Estimate::bernoulli(h, n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::{Halfspace, LpBall};

    #[test]
    fn zero_noise_never_disagrees() {
        let b = LpBall::euclidean(4, 2.0).unwrap();
        let e = estimate_gns(&b, 0.0, 100_000, &RandomStream::new(0, 0)).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(estimate_gns(&b, 0.6, 10, &RandomStream::new(0, 0)).is_err());
        assert!(estimate_stability(&b, 1.2, 10, &RandomStream::new(0, 0)).is_err());
    }

    #[test]
    fn sheppard_values() {
        assert!((sheppard_gns(0.1) - 0.204_832_764_699_133_46).abs() < 1e-12);
        assert!((sheppard_gns(0.05) - 0.143_566_293_128_706_27).abs() < 1e-12);
        assert!((sheppard_gns(0.25) - 1.0 / 3.0).abs() < 1e-12);
        let h = Halfspace::new(vec![1.0, 1.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        let e = estimate_gns(&h, 0.1, 1_000_000, &RandomStream::new(1, 0)).unwrap();
        assert!(e.within(sheppard_gns(0.1), 3.0), "{e:?}");
    }

    #[test]
    fn gns_and_stability_identity() {
        let b = LpBall::euclidean(16, 4.0).unwrap();
        let s = RandomStream::new(2, 0);
        let g = estimate_gns(&b, 0.2, 400_000, &s.substream(0)).unwrap();
        let st = estimate_stability(&b, 0.6, 400_000, &s.substream(1)).unwrap();
        assert!(g.agrees_with(&gns_from_stability(&st), 3.0, 0.0));
        // Same probes: the two are deterministic transforms of each other.
        let st_same = estimate_stability(&b, 0.6, 400_000, &s.substream(0)).unwrap();
        assert!((g.value - gns_from_stability(&st_same).value).abs() < 1e-12);
    }

    #[test]
    fn coupled_curve_nondecreasing() {
        let b = LpBall::euclidean(6, 6f64.sqrt()).unwrap();
        let rhos = [0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
        let c = estimate_gns_curve(&b, &rhos, 200_000, &RandomStream::new(3, 0)).unwrap();
        assert_eq!(c[0].value, 0.0);
        for w in c.windows(2) {
            assert!(w[1].value + 3.0 * w[1].stderr.hypot(w[0].stderr) >= w[0].value);
        }
    }
}
