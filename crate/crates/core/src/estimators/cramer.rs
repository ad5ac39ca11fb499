//! Empirical tail ratios for sums of iid and without-replacement samples.

use crate::error::{Error, Result};
use crate::estimate::Estimate;
use crate::mc::map_chunks;
use crate::rng::RandomStream;
use crate::special::{gaussian_abs_moment, phi_sf};
use serde::Serialize;

/// `Pr[S >= t * scale] / (1 - Phi(t))` with the numerator's Wilson interval carried through.
#[derive(Clone, Debug, Serialize)]
pub struct TailRatio {
    pub t: f64,
    pub exceed: Estimate,
    pub gaussian_tail: f64,
    pub ratio: f64,
    pub ratio_low: f64,
    pub ratio_high: f64,
}

impl TailRatio {
    fn new(t: f64, exceed: Estimate) -> Self {
        let g = phi_sf(t);
        TailRatio {
            t,
            gaussian_tail: g,
            ratio: exceed.value / g,
            ratio_low: exceed.ci_low / g,
            ratio_high: exceed.ci_high / g,
            exceed,
        }
    }

    /// True when `target` lies inside the ratio interval.
    pub fn covers(&self, target: f64) -> bool {
        self.ratio_low <= target && target <= self.ratio_high
    }
}

fn count_exceedances(
    trials: u64,
    stream: &RandomStream,
    thresholds: &[f64],
    mut_init: impl Fn() -> Box<dyn FnMut(&mut RandomStream) -> f64> + Sync,
) -> Vec<Estimate> {
    let parts = map_chunks(trials, stream, |mut s, len| {
        let mut draw = mut_init();
        let mut hits = vec![0u64; thresholds.len()];
        for _ in 0..len {
            let v = draw(&mut s);
            for (h, &th) in hits.iter_mut().zip(thresholds) {
                *h += (v >= th) as u64;
            }
        }
        hits
    });
    (0..thresholds.len())
        .map(|i| Estimate::bernoulli(parts.iter().map(|p| p[i]).sum(), trials))
        .collect()
}

/// Sums of `m` draws without replacement from `population`, after normalizing it to
/// zero sum and squared sum `n`; thresholds are `t * sqrt(m (1 - m/n))`.
pub fn tail_ratio_without_replacement(
    population: &[f64],
    m: usize,
    t_grid: &[f64],
    trials: u64,
    stream: &RandomStream,
) -> Result<Vec<TailRatio>> {
    let n = population.len();
    if n < 2 || m == 0 || m > n {
        return Err(Error::param(format!("need 1 <= m <= n with n >= 2, got m={m}, n={n}")));
    }
    if trials == 0 {
        return Err(Error::param("trials must be positive"));
    }
    let mean = population.iter().sum::<f64>() / n as f64;
    let ss: f64 = population.iter().map(|a| (a - mean).powi(2)).sum();
    if !(ss > 0.0) || !ss.is_finite() {
        return Err(Error::domain("population is constant; it cannot be normalized"));
    }
    let scale = (n as f64 / ss).sqrt();
    let normalized: Vec<f64> = population.iter().map(|a| (a - mean) * scale).collect();
    let omega = (m as f64 * (1.0 - m as f64 / n as f64)).sqrt();

    if m == n {
        // The whole population sums to zero; no sampling needed.
        return Ok(t_grid
            .iter()
            .map(|&t| {
                let hits = if t <= 0.0 { trials } else { 0 };
                TailRatio::new(t, Estimate::bernoulli(hits, trials))
            })
            .collect());
    }

    let thresholds: Vec<f64> = t_grid.iter().map(|t| t * omega).collect();
    let est = count_exceedances(trials, stream, &thresholds, || {
        // Partial Fisher-Yates on a chunk-local array; leaving it permuted is harmless.
        let mut a = normalized.clone();
        Box::new(move |s: &mut RandomStream| {
            let mut sum = 0.0;
            for i in 0..m {
                let j = i + s.below((n - i) as u64) as usize;
                a.swap(i, j);
                sum += a[i];
            }
            sum
        })
    });
    Ok(t_grid.iter().zip(est).map(|(&t, e)| TailRatio::new(t, e)).collect())
}

/// Sums of `m` iid copies of `|g|^p - A_p`; thresholds are `z * sigma * sqrt(m)`
/// with `sigma^2 = A_{2p} - A_p^2`.
pub fn iid_tail_check(
    p: f64,
    m: usize,
    z_grid: &[f64],
    trials: u64,
    stream: &RandomStream,
) -> Result<Vec<TailRatio>> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::param(format!("exponent must lie in [1, 2], got {p}")));
    }
    if m == 0 || trials == 0 {
        return Err(Error::param("m and trials must be positive"));
    }
    let a_p = gaussian_abs_moment(p);
    let sigma = (gaussian_abs_moment(2.0 * p) - a_p * a_p).sqrt();
    let shift = m as f64 * a_p;
    let thresholds: Vec<f64> = z_grid.iter().map(|z| z * sigma * (m as f64).sqrt() + shift).collect();
    let est = count_exceedances(trials, stream, &thresholds, || {
        let mut z = vec![0.0; m];
        Box::new(move |s: &mut RandomStream| {
            s.fill_normals(&mut z);
            if p == 2.0 {
                z.iter().map(|g| g * g).sum()
            } else if p == 1.0 {
                z.iter().map(|g| g.abs()).sum()
            } else {
                z.iter().map(|g| g.abs().powf(p)).sum()
            }
        })
    });
    Ok(z_grid.iter().zip(est).map(|(&z, e)| TailRatio::new(z, e)).collect())
}
