//! Random Nazarov polytopes.
//!
//! The target body is the Euclidean ball of radius `sqrt(n)`. Points with norm
//! `d_in = sqrt(n) - eps/4` should almost always be accepted and points with norm
//! `d_out = sqrt(n) + eps/4` almost always rejected; `w` balances the two tails
//! and `s` fixes the acceptance level at radius `d_in`.

use crate::bodies::Polytope;
use crate::error::{Error, Result};
use crate::optim::bisect;
use crate::rng::RandomStream;
use crate::special::{chi_pdf, log_phi_cdf, log_phi_sf};
use serde::Serialize;

/// Default cap on materialized facets.
pub const NAZAROV_FACET_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NazarovParams {
    pub n: usize,
    pub eps: f64,
    pub d_in: f64,
    pub d_out: f64,
    pub w: f64,
    /// Natural log of the facet count.
    pub log_s: f64,
    /// `ln(tail(w/d_out)/tail(w/d_in)) - ln((4/eps) ln(4/eps))` at the returned `w`.
    pub residual: f64,
}

impl NazarovParams {
    /// `w / (n^{3/4} sqrt((1/eps)(ln(4/eps) + ln ln(4/eps))))`.
    pub fn scaling_ratio(&self) -> f64 {
        let l = (4.0 / self.eps).ln();
        self.w / ((self.n as f64).powf(0.75) * ((l + l.ln()) / self.eps).sqrt())
    }
}

fn ratio_gap(w: f64, d_in: f64, d_out: f64, target: f64) -> f64 {
    log_phi_sf(w / d_out) - log_phi_sf(w / d_in) - target
}

/// Solves for `w` on the bracket `[sqrt(n), 100 n]`.
pub fn solve_nazarov_params(n: usize, eps: f64) -> Result<NazarovParams> {
    let nf = n as f64;
    solve_nazarov_params_in(n, eps, nf.sqrt(), 100.0 * nf)
}

/// Solves `(1 - Phi(w/d_out)) / (1 - Phi(w/d_in)) = (4/eps) ln(4/eps)` by
/// bisection in log-tail space on `[lo, hi]`.
pub fn solve_nazarov_params_in(n: usize, eps: f64, lo: f64, hi: f64) -> Result<NazarovParams> {
    if n < 2 {
        return Err(Error::param(format!("dimension must be at least 2, got {n}")));
    }
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::param(format!("eps must lie in (0, 0.5), got {eps}")));
    }
    let root = (n as f64).sqrt();
    let (d_in, d_out) = (root - eps / 4.0, root + eps / 4.0);
    let target = ((4.0 / eps) * (4.0 / eps).ln()).ln();
    let f = |w: f64| ratio_gap(w, d_in, d_out, target);
    let w = bisect(f, lo, hi, 1e-13).map_err(|e| match e {
        Error::Solver(msg) => Error::Solver(format!(
            "n={n}, eps={eps}, d_in={d_in}, d_out={d_out}, log target={target}: {msg}"
        )),
        other => other,
    })?;
    Ok(NazarovParams {
        n,
        eps,
        d_in,
        d_out,
        w,
        log_s: (eps / 4.0).ln() - log_phi_sf(w / d_in),
        residual: f(w),
    })
}

/// Draws `s` Gaussian normals and returns `{x : <x, g_i> <= w for all i}`.
pub fn sample_nazarov(n: usize, w: f64, s: u64, stream: &mut RandomStream) -> Result<Polytope> {
    sample_nazarov_with_budget(n, w, s, NAZAROV_FACET_BUDGET, stream)
}

pub fn sample_nazarov_with_budget(
    n: usize,
    w: f64,
    s: u64,
    budget: u64,
    stream: &mut RandomStream,
) -> Result<Polytope> {
    if s == 0 {
        return Err(Error::param("facet count must be positive"));
    }
    if s > budget {
        return Err(Error::Budget {
            what: "Nazarov facet count",
            requested: s as u128,
            cap: budget as u128,
        });
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::param(format!("threshold w must be positive, got {w}")));
    }
    let mut poly = Polytope::new(n)?;
    let mut g = vec![0.0; n];
    for _ in 0..s {
        let len = loop {
            stream.fill_normals(&mut g);
            let len = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            if len > 0.0 {
                break len;
            }
        };
        g.iter_mut().for_each(|x| *x /= len);
        poly.push_unit(&g, w / len);
    }
    Ok(poly)
}

/// Expected Gaussian volume of a draw, `E_r[Phi(w/r)^s]` with `r` chi-distributed
/// (Simpson's rule on `[0, sqrt(n) + 12]`).
pub fn expected_nazarov_volume(n: usize, w: f64, s: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if !(w > 0.0 && w.is_finite()) || s == 0 {
        return Err(Error::param(format!("need w > 0 and s >= 1, got w={w}, s={s}")));
    }
    const STEPS: usize = 4000;
    let hi = (n as f64).sqrt() + 12.0;
    let h = hi / STEPS as f64;
    let f = |r: f64| -> Result<f64> {
        if r <= 0.0 {
            return Ok(0.0);
        }
        Ok(chi_pdf(r, n)? * (s as f64 * log_phi_cdf(w / r)).exp())
    };
    let mut acc = f(0.0)? + f(hi)?;
    for i in 1..STEPS {
        acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// Threshold `w` whose expected draw volume equals `target`.
pub fn nazarov_w_for_volume(n: usize, s: u64, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::param(format!("target volume must lie in (0, 1), got {target}")));
    }
    let hi = 4.0 * ((n as f64).sqrt() + 12.0) * (1.0 + (s as f64).ln()).sqrt();
    bisect(|w| expected_nazarov_volume(n, w, s).unwrap_or(f64::NAN) - target, 1e-6, hi, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Body;
    use crate::special::phi_cdf;

    #[test]
    fn oracle_root_and_bracket_invariance() {
        let p = solve_nazarov_params(16, 0.1).unwrap();
        assert!((p.w - 79.850_859_385_185_69).abs() / 79.85 < 1e-9);
        assert!((p.log_s - 202.001_883_607_423_7).abs() < 1e-6);
        assert!(p.residual.abs() <= 1e-6);
        assert_eq!(p.d_in, 4.0 - 0.025);
        let q = solve_nazarov_params_in(16, 0.1, 4.0, 3200.0).unwrap();
        assert!((p.w - q.w).abs() <= 1e-6);
    }

    #[test]
    fn grid_scan_agrees() {
        // Dense scan of the log-ratio gap for a sign change.
        let p = solve_nazarov_params(16, 0.1).unwrap();
        let target = ((40.0f64) * 40f64.ln()).ln();
        let mut w = 4.0;
        let mut prev = ratio_gap(w, p.d_in, p.d_out, target);
        let mut found = None;
        while w < 1600.0 {
            let next = w + 0.001;
            let g = ratio_gap(next, p.d_in, p.d_out, target);
            if prev < 0.0 && g >= 0.0 {
                found = Some(next);
                break;
            }
            prev = g;
            w = next;
        }
        let scan = found.unwrap();
        assert!((scan - p.w).abs() / p.w < 5e-5);
    }

    #[test]
    fn scaling_and_monotonicity() {
        let mut last_by_eps = Vec::new();
        for n in [16, 64, 256, 1024, 4096] {
            let mut row = Vec::new();
            for eps in [0.3, 0.1, 0.03] {
                let p = solve_nazarov_params(n, eps).unwrap();
                let r = p.scaling_ratio();
                assert!((0.2..=5.0).contains(&r), "n={n} eps={eps} ratio={r}");
                assert!(p.residual.abs() <= 1e-6);
                row.push(p.w);
            }
            assert!(row.windows(2).all(|w| w[0] < w[1]), "w increases in 1/eps");
            if let Some(prev) = last_by_eps.last() {
                let prev: &Vec<f64> = prev;
                assert!(prev.iter().zip(&row).all(|(a, b)| a < b), "w increases in n");
            }
            last_by_eps.push(row);
        }
    }

    #[test]
    fn expected_volume_matches_draws() {
        use crate::estimators::estimate_volume;
        let w = nazarov_w_for_volume(6, 20, 0.6).unwrap();
        assert!((expected_nazarov_volume(6, w, 20).unwrap() - 0.6).abs() < 1e-9);
        let mut s = RandomStream::new(3, 0);
        let probes = RandomStream::new(4, 0);
        let mut m = crate::estimate::Moments::new();
        for k in 0..400 {
            let p = sample_nazarov(6, w, 20, &mut s).unwrap();
            m.push(estimate_volume(&p, 2000, &probes.substream(k)).value);
        }
        assert!(crate::estimate::Estimate::from_moments(&m).within(0.6, 3.0));
        assert!(expected_nazarov_volume(6, w, 40).unwrap() < 0.6);
    }

    #[test]
    fn bad_inputs() {
        assert!(solve_nazarov_params(1, 0.1).is_err());
        assert!(solve_nazarov_params(16, 0.5).is_err());
        assert!(matches!(
            solve_nazarov_params_in(16, 0.1, 1000.0, 2000.0),
            Err(Error::Solver(_))
        ));
        let mut s = RandomStream::new(0, 0);
        assert!(matches!(
            sample_nazarov(4, 1.0, NAZAROV_FACET_BUDGET + 1, &mut s),
            Err(Error::Budget { .. })
        ));
        assert!(sample_nazarov(4, 0.0, 3, &mut s).is_err());
    }

    #[test]
    fn draws_contain_origin_and_single_facet_distance() {
        let mut s = RandomStream::new(1, 0);
        for _ in 0..20 {
            let p = sample_nazarov(5, 2.0, 10, &mut s).unwrap();
            assert!(p.contains_origin());
            assert!(p.contains(&[0.0; 5]));
        }
        let one = sample_nazarov(3, 1.5, 1, &mut s).unwrap();
        assert_eq!(one.facet_count(), 1);
        let v = one.normal(0).to_vec();
        let t = one.threshold(0);
        let inside: Vec<f64> = v.iter().map(|x| x * (t - 1e-9)).collect();
        let outside: Vec<f64> = v.iter().map(|x| x * (t + 1e-9)).collect();
        assert!(one.contains(&inside) && !one.contains(&outside));
    }

    #[test]
    fn fixed_point_acceptance_probability() {
        // Pr[x in K] = Phi(w/|x|)^s at n=4, s=8, w=3, |x|=2.
        let x = [2.0, 0.0, 0.0, 0.0];
        let draws = 10_000u64;
        let root = RandomStream::new(17, 0);
        let mut hits = 0u64;
        for d in 0..draws {
            let p = sample_nazarov(4, 3.0, 8, &mut root.substream(d)).unwrap();
            hits += p.contains(&x) as u64;
        }
        let want = phi_cdf(1.5).powi(8);
        assert!((want - 0.575_136_632_370_800_3).abs() < 1e-12);
        let e = crate::Estimate::bernoulli(hits, draws);
        assert!(e.within(want, 3.0), "{} vs {want}", e.value);
    }
}
