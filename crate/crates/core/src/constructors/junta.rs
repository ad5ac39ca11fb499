//! Junta intersections approximating the p-power ball `B_p`.
//!
//! Each of `M` terms constrains `sum_{k<=m} |x_{i_k}|^p <= theta` on a random
//! `m`-subset of coordinates. `theta` sits `t` standard deviations above the
//! rescaled inner radius, and `M = eps / (1 - Phi(t))`.

use crate::bodies::{JuntaIntersection, JuntaTerm};
use crate::error::{Error, Result};
use crate::estimate::Estimate;
use crate::mc::map_chunks;
use crate::rng::RandomStream;
use crate::special::{gaussian_abs_moment, log_phi_sf};
use serde::Serialize;
use std::collections::HashSet;

/// Unnamed absolute constants of the parameter equations (all default to 1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JuntaConstants {
    /// Scale of `t / m^{1/6}` relative to `eps^2 / ln(1/eps)` for `p > 1`.
    pub c2: f64,
    /// Tuple-size constant for `p > 1`.
    pub c3: f64,
    /// Tuple-size constant for `p = 1`.
    pub l1_m: f64,
    /// `t / m^{1/6}` for `p = 1`.
    pub l1_t: f64,
}

impl Default for JuntaConstants {
    fn default() -> Self {
        JuntaConstants {
            c2: 1.0,
            c3: 1.0,
            l1_m: 1.0,
            l1_t: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JuntaMode {
    /// `p` in `(1, 2)`.
    General,
    /// `p = 1`: every term is a `2^m`-facet polytope.
    L1,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JuntaParams {
    pub n: usize,
    pub p: f64,
    pub eps: f64,
    pub mode: JuntaMode,
    pub constants: JuntaConstants,
    /// `t / m^{1/6}`.
    pub c1: f64,
    /// Tuple size before rounding and clamping.
    pub m_formula: f64,
    pub m: usize,
    /// True when `m` was clamped to `[1, n/2]`.
    pub m_clamped: bool,
    pub t: f64,
    pub mu_p: f64,
    pub sigma_p: f64,
    /// `A_{2p} - A_p^2`.
    pub c: f64,
    pub d_in: f64,
    pub omega: f64,
    pub theta: f64,
    pub log_m_terms: f64,
    pub warnings: Vec<String>,
}

impl JuntaParams {
    /// `M = eps / (1 - Phi(t))` as a real number (may be huge).
    pub fn m_terms(&self) -> f64 {
        self.log_m_terms.exp()
    }

    /// `M` rounded up to an integer, when representable.
    pub fn m_terms_rounded(&self) -> Option<u64> {
        let m = self.m_terms().ceil();
        (m.is_finite() && m < 9.0e18).then_some(m.max(1.0) as u64)
    }
}

/// Evaluates the tuple size, threshold and term count for `(n, p, eps)`.
pub fn solve_junta_params(n: usize, p: f64, eps: f64, constants: JuntaConstants) -> Result<JuntaParams> {
    if n < 2 {
        return Err(Error::param(format!("dimension must be at least 2, got {n}")));
    }
    if !(1.0..2.0).contains(&p) {
        return Err(Error::param(format!("p must lie in [1, 2), got {p}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(format!("eps must lie in (0, 1), got {eps}")));
    }
    for (name, v) in [
        ("c2", constants.c2),
        ("c3", constants.c3),
        ("l1_m", constants.l1_m),
        ("l1_t", constants.l1_t),
    ] {
        if !(v > 0.0) {
            return Err(Error::param(format!("constant {name} must be positive, got {v}")));
        }
    }
    let nf = n as f64;
    let mut warnings = Vec::new();
    let floor = 1.0 / nf.ln().sqrt();
    if eps < floor {
        warnings.push(format!("eps={eps} is below 1/sqrt(ln n)={floor:.4}"));
    }
    let l = (1.0 / eps).ln();
    let mode = if p == 1.0 { JuntaMode::L1 } else { JuntaMode::General };
    let (m_formula, c1) = match mode {
        JuntaMode::L1 => (constants.l1_m * (l / eps).powf(1.5) * nf.powf(0.75), constants.l1_t),
        JuntaMode::General => (
            constants.c3 * l.powf(2.25) / eps.powi(4) * nf.powf(0.75),
            constants.c2 * eps * eps / l,
        ),
    };
    let cap = (n / 2).max(1);
    let rounded = m_formula.round().max(1.0);
    let m = if rounded > cap as f64 { cap } else { rounded as usize };
    let m_clamped = rounded > cap as f64 || m_formula < 0.5;
    if m_clamped {
        warnings.push(format!("tuple size {m_formula:.2} clamped to {m} (range [1, n/2])"));
    }
    let mf = m as f64;
    let t = c1 * mf.powf(1.0 / 6.0);
    let a_p = gaussian_abs_moment(p);
    let c = gaussian_abs_moment(2.0 * p) - a_p * a_p;
    let mu_p = nf * a_p;
    let sigma_p = (nf * c).sqrt();
    let d_in = mu_p - eps * sigma_p;
    let omega = (mf * (1.0 - mf / nf)).max(0.0).sqrt();
    let theta = d_in * mf / nf + c.sqrt() * t * omega;
    for w in &warnings {
        log::warn!("junta parameters: {w}");
    }
    Ok(JuntaParams {
        n,
        p,
        eps,
        mode,
        constants,
        c1,
        m_formula,
        m,
        m_clamped,
        t,
        mu_p,
        sigma_p,
        c,
        d_in,
        omega,
        theta,
        log_m_terms: eps.ln() - log_phi_sf(t),
        warnings,
    })
}

/// `count` uniformly random `m`-subsets of `0..n` (Floyd's algorithm per tuple).
pub fn sample_junta_intersection(
    n: usize,
    p: f64,
    count: usize,
    m: usize,
    theta: f64,
    stream: &mut RandomStream,
) -> Result<JuntaIntersection> {
    if m > n {
        return Err(Error::param(format!("tuple size {m} exceeds dimension {n}")));
    }
    if m == 0 || count == 0 {
        return Err(Error::param("tuple size and term count must be positive"));
    }
    let mut terms = Vec::with_capacity(count);
    let mut seen = HashSet::new();
    for _ in 0..count {
        let mut idx = Vec::with_capacity(m);
        seen.clear();
        for j in (n - m)..n {
            let r = stream.below(j as u64 + 1) as usize;
            let pick = if seen.contains(&r) { j } else { r };
            seen.insert(pick);
            idx.push(pick);
        }
        terms.push(JuntaTerm { indices: idx, theta });
    }
    JuntaIntersection::new(n, p, terms)
}

#[inline]
fn p_power_sum(p: f64, x: &[f64]) -> f64 {
    if p == 1.0 {
        x.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        x.iter().map(|v| v * v).sum()
    } else {
        x.iter().map(|v| v.abs().powf(p)).sum()
    }
}

/// Draws `samples` values of `sum_{k<=m} |g_k|^p` in chunk order.
fn p_power_samples(m: usize, p: f64, samples: u64, stream: &RandomStream) -> Vec<f64> {
    map_chunks(samples, stream, |mut s, len| {
        let mut g = vec![0.0; m];
        (0..len)
            .map(|_| {
                s.fill_normals(&mut g);
                p_power_sum(p, &g)
            })
            .collect::<Vec<_>>()
    })
    .concat()
}

/// Empirical `target_volume`-quantile of `sum_{k<=m} |g_k|^p`: the smallest
/// sample value whose empirical CDF reaches the target.
pub fn empirical_theta(
    n: usize,
    p: f64,
    m: usize,
    target_volume: f64,
    samples: u64,
    stream: &RandomStream,
) -> Result<f64> {
    if !(target_volume > 0.0 && target_volume < 1.0) {
        return Err(Error::param(format!("target volume must lie in (0, 1), got {target_volume}")));
    }
    if m == 0 || m > n {
        return Err(Error::param(format!("tuple size must lie in [1, {n}], got {m}")));
    }
    if samples < 1000 {
        return Err(Error::param("empirical_theta needs at least 1000 samples"));
    }
    if !(p >= 1.0) {
        return Err(Error::param(format!("p must be at least 1, got {p}")));
    }
    let mut vals = p_power_samples(m, p, samples, stream);
    let k = ((target_volume * samples as f64).ceil() as usize).clamp(1, vals.len()) - 1;
    let (_, kth, _) = vals.select_nth_unstable_by(k, f64::total_cmp);
    Ok(*kth)
}

/// `(1 - ln M / M, 1 - 1/(3M))`.
pub fn junta_term_bounds(m_terms: f64) -> (f64, f64) {
    (1.0 - m_terms.ln() / m_terms, 1.0 - 1.0 / (3.0 * m_terms))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TermVolumeCheck {
    pub volume: Estimate,
    pub m_terms: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_holds: bool,
    pub upper_holds: bool,
    pub bounds_hold: bool,
}

impl TermVolumeCheck {
    /// Compares `volume` with the bounds at three standard errors.
    pub fn from_volume(volume: Estimate, m_terms: f64) -> Self {
        let (lower, upper) = junta_term_bounds(m_terms);
        let slack = 3.0 * volume.stderr;
        let lower_holds = volume.value >= lower - slack;
        let upper_holds = volume.value <= upper + slack;
        TermVolumeCheck {
            volume,
            m_terms,
            lower,
            upper,
            lower_holds,
            upper_holds,
            bounds_hold: lower_holds && upper_holds,
        }
    }
}

/// Volume of one term `Pr[sum_{k<=m} |g_k|^p <= theta]` against the bounds for `M` terms.
pub fn junta_term_volume_check(
    m: usize,
    p: f64,
    theta: f64,
    m_terms: f64,
    samples: u64,
    stream: &RandomStream,
) -> Result<TermVolumeCheck> {
    if m == 0 || samples == 0 {
        return Err(Error::param("tuple size and sample count must be positive"));
    }
    if !(m_terms >= 3.0) {
        return Err(Error::param(format!("term count must be at least 3, got {m_terms}")));
    }
    let hits: u64 = map_chunks(samples, stream, |mut s, len| {
        let mut g = vec![0.0; m];
        (0..len)
            .filter(|_| {
                s.fill_normals(&mut g);
                p_power_sum(p, &g) <= theta
            })
            .count() as u64
    })
    .into_iter()
    .sum();
    Ok(TermVolumeCheck::from_volume(Estimate::bernoulli(hits, samples), m_terms))
}
