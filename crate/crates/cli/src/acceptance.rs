//! The acceptance suite: fifteen fixed-seed checks with pass/fail reports.
//!
//! The full tier uses the stated sample sizes. The fast tier cuts the heavy
//! Monte Carlo budgets so the whole suite fits in a few single-core minutes;
//! its gates are unchanged, only the probe counts (and so the sigmas) differ.

use crate::app::{execute, Command};
use crate::body_spec::BodySpec;
use crate::config::Settings;
use anyhow::Result;
use clap::ValueEnum;
use gaussapprox::bodies::{Body, Halfspace, LpBall};
use gaussapprox::constructors::{
    empirical_theta, nazarov_w_for_volume, sample_junta_intersection, sample_nazarov, solve_junta_params,
    solve_nazarov_params, tangent_approximator, DirectionMode, JuntaConstants, TangentConfig,
};
use gaussapprox::estimate::Moments;
use gaussapprox::estimators::{
    diagonal_level2_coeffs, estimate_directional_influence, estimate_distance, estimate_gns,
    estimate_hermite_coeff, estimate_influence_dilation, estimate_stability, estimate_total_influence,
    estimate_two_point, estimate_volume, gns_from_stability, iid_tail_check, sheppard_gns,
    tail_ratio_without_replacement, zoom_collapse_curve, zoom_variance_profile, GaugeProfile,
    HermiteExpansion,
};
use gaussapprox::hermite::{enumerate_multi_indices, MultiIndex};
use gaussapprox::mc::map_chunks;
use gaussapprox::optim::golden_section;
use gaussapprox::special::{chi2_cdf, chi2_sf, chi_pdf, gaussian_abs_moment, phi_sf};
use gaussapprox::tails::{check_chi2_tail_bound, check_gaussian_tail_bound, check_hazard_fact, HAZARD_CONSTANT};
use gaussapprox::{Estimate, RandomStream};
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::SQRT_2;
use std::time::Instant;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    Fast,
    Full,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub tier: Tier,
    /// Empty means every criterion.
    pub only: Vec<u8>,
    /// Replacement sigma multipliers (default 3), for fixtures.
    pub sigma_overrides: Vec<(u8, f64)>,
}

impl Default for Tier {
    fn default() -> Self {
        Tier::Fast
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub measured: Value,
    pub tolerance: String,
    pub elapsed_ms: u64,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {} {} | {} | {} ms",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.tolerance,
            self.elapsed_ms
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub tier: Tier,
    pub criteria: Vec<CriterionReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

/// Per-criterion knobs.
#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub tier: Tier,
    /// Sigma multiplier for statistical gates.
    pub k: f64,
}

impl Ctx {
    pub fn new(tier: Tier) -> Self {
        Ctx { tier, k: 3.0 }
    }

    fn pick<T>(&self, full: T, fast: T) -> T {
        match self.tier {
            Tier::Full => full,
            Tier::Fast => fast,
        }
    }

    fn within(&self, e: &Estimate, target: f64) -> bool {
        (e.value - target).abs() <= self.k * e.stderr
    }

    fn agree(&self, a: &Estimate, b: &Estimate, rel: f64) -> bool {
        (a.value - b.value).abs() <= rel * a.value.abs() + self.k * a.stderr.hypot(b.stderr)
    }
}

struct Outcome {
    passed: bool,
    measured: Value,
    tolerance: String,
}

pub const NAMES: [&str; 15] = [
    "analytic volume oracle",
    "ball influence",
    "cross-polytope influence",
    "influence upper bound on random polytopes",
    "two-route identities",
    "halfspace noise sensitivity",
    "tangent approximator on a disk",
    "random polytope error curve",
    "l1 junta approximator",
    "parameter-solver scaling",
    "sampling tail ratios",
    "analytic inequality grids",
    "junta term volume bounds",
    "zoom collapse trend",
    "thread-count determinism",
];

/// Runs criterion `id` (1..=15).
pub fn run_criterion(id: u8, ctx: &Ctx) -> CriterionReport {
    let t0 = Instant::now();
    let out = match id {
        1 => c01(ctx),
        2 => c02(ctx),
        3 => c03(ctx),
        4 => c04(ctx),
        5 => c05(ctx),
        6 => c06(ctx),
        7 => c07(ctx),
        8 => c08(ctx),
        9 => c09(ctx),
        10 => c10(ctx),
        11 => c11(ctx),
        12 => c12(ctx),
        13 => c13(ctx),
        14 => c14(ctx),
        15 => c15(ctx),
        _ => Err(anyhow::anyhow!("no criterion {id}")),
    };
    let out = out.unwrap_or_else(|e| Outcome {
        passed: false,
        measured: json!({"error": format!("{e:#}")}),
        tolerance: "criterion raised an error".into(),
    });
    CriterionReport {
        id,
        name: NAMES.get(id as usize - 1).copied().unwrap_or("unknown"),
        passed: out.passed,
        measured: out.measured,
        tolerance: out.tolerance,
        elapsed_ms: t0.elapsed().as_millis() as u64,
    }
}

pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    run_suite_with(opts, |_| {})
}

/// Like [`run_suite`], calling `each` as every criterion finishes.
pub fn run_suite_with(opts: &SuiteOptions, mut each: impl FnMut(&CriterionReport)) -> SuiteReport {
    let ids: Vec<u8> = if opts.only.is_empty() { (1..=15).collect() } else { opts.only.clone() };
    let criteria = ids
        .into_iter()
        .map(|id| {
            let mut ctx = Ctx::new(opts.tier);
            if let Some(&(_, k)) = opts.sigma_overrides.iter().find(|(i, _)| *i == id) {
                ctx.k = k;
            }
            let r = run_criterion(id, &ctx);
            each(&r);
            r
        })
        .collect();
    SuiteReport { tier: opts.tier, criteria }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn ball(n: usize) -> LpBall {
    LpBall::euclidean(n, (n as f64).sqrt()).expect("positive radius")
}

fn c01(ctx: &Ctx) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [10usize, 100] {
        let est = estimate_volume(&ball(n), 1_000_000, &RandomStream::new(1, n as u64));
        let exact = chi2_cdf(n as f64, n)?;
        ok &= ctx.within(&est, exact);
        rows.push(json!({"n": n, "estimate": est, "exact": exact}));
    }
    let c100 = chi2_cdf(100.0, 100)?;
    ok &= (c100 - 0.5).abs() <= 0.06;
    Ok(Outcome {
        passed: ok,
        measured: json!({"volumes": rows, "chi2_cdf_100": c100}),
        tolerance: format!("|MC - chi2_cdf(n, n)| <= {}σ at 1e6 probes; |chi2_cdf(100,100) - 1/2| <= 0.06", ctx.k),
    })
}

fn c02(ctx: &Ctx) -> Result<Outcome> {
    let samples = ctx.pick(10_000_000, 2_000_000);
    let est = estimate_total_influence(&ball(64), samples, &RandomStream::new(2, 0));
    let exact = 8.0 * chi_pdf(8.0, 64)?;
    let floor = 0.398 * 8.0 * 0.95;
    Ok(Outcome {
        passed: ctx.within(&est, exact) && exact >= floor,
        measured: json!({"estimate": est, "exact": exact, "floor": floor}),
        tolerance: format!("|MC - 8 chi_pdf(8, 64)| <= {}σ; exact >= {floor:.4}", ctx.k),
    })
}

fn c03(ctx: &Ctx) -> Result<Outcome> {
    let samples = ctx.pick(10_000_000, 2_000_000);
    let b = LpBall::canonical(64, 1.0)?;
    let est = estimate_total_influence(&b, samples, &RandomStream::new(3, 0));
    let floor = 0.1 * 8.0 * (1.0 - 0.15);
    Ok(Outcome {
        passed: est.value - ctx.k * est.stderr >= floor,
        measured: json!({"estimate": est, "floor": floor}),
        tolerance: format!("estimate - {}σ >= {floor}", ctx.k),
    })
}

fn c04(ctx: &Ctx) -> Result<Outcome> {
    let seeds = ctx.pick(20u64, 5);
    let samples = ctx.pick(100_000, 20_000);
    let n = 16;
    let mut rows = Vec::new();
    let mut ok = true;
    for s in [8u64, 64, 512] {
        let w = nazarov_w_for_volume(n, s, 0.6)?;
        for seed in 0..seeds {
            let mut draw = RandomStream::new(400 + seed, s);
            let p = sample_nazarov(n, w, s, &mut draw)?;
            let probes = RandomStream::new(401 + seed, s);
            let vol = estimate_volume(&p, samples, &probes.substream(0));
            let tinf = estimate_total_influence(&p, samples, &probes.substream(1));
            let bound = 7.0 * (s as f64).ln();
            let vol_ok = (0.3..=0.9).contains(&vol.value);
            let holds = tinf.value - ctx.k * tinf.stderr < bound;
            ok &= vol_ok && holds;
            rows.push(json!({"s": s, "seed": seed, "w": w, "volume": vol.value, "tinf": tinf, "bound": bound, "holds": holds}));
        }
    }
    Ok(Outcome {
        passed: ok,
        measured: json!(rows),
        tolerance: format!("volume in [0.3, 0.9] and TInf - {}σ < 7 ln s for every draw", ctx.k),
    })
}

/// Random degree-2 expansion used by the coefficient-route check.
fn fixed_expansion(n: usize, seed: u64) -> Result<HermiteExpansion> {
    let mut s = RandomStream::new(seed, 0);
    let mut e = HermiteExpansion::new(n)?;
    for a in enumerate_multi_indices(n, 2)? {
        e.set(a, 0.5 * s.normal())?;
    }
    Ok(e)
}

/// The five two-route identities; returns the measurements and whether all agree.
pub fn identity_suite(samples: u64, stream: &RandomStream, k: f64) -> Result<(Value, bool)> {
    identity_suite_sized(samples, 2000, stream, k)
}

fn identity_suite_sized(samples: u64, anchors: usize, stream: &RandomStream, k: f64) -> Result<(Value, bool)> {
    let ctx = Ctx { tier: Tier::Full, k };
    let b16 = ball(16);
    let b8 = ball(8);

    let direct = estimate_total_influence(&b16, 2 * samples, &stream.substream(0));
    let dil = estimate_influence_dilation(&b16, 0.01, 2 * samples, &stream.substream(1))?;
    let a = ctx.agree(&direct, &dil, 0.05);

    let mut e1 = vec![0.0; 8];
    e1[0] = 1.0;
    let inf = estimate_directional_influence(&b8, &e1, samples, &stream.substream(2))?;
    let coef = estimate_hermite_coeff(&b8, &MultiIndex::axis(8, 0, 2), samples, &stream.substream(3))?;
    let linked = coef.scaled(-SQRT_2);
    let b = ctx.agree(&inf, &linked, 0.0);

    let gns = estimate_gns(&b16, 0.2, samples, &stream.substream(4))?;
    let via_stab = gns_from_stability(&estimate_stability(&b16, 0.6, samples, &stream.substream(5))?);
    let c = ctx.agree(&gns, &via_stab, 0.0);

    let zoom = zoom_variance_profile(&b16, 0.3, anchors, anchors, &stream.substream(6))?;
    let twice_gns = estimate_gns(&b16, 0.15, samples, &stream.substream(7))?.scaled(2.0);
    let d = ctx.agree(&zoom.mean_variance, &twice_gns, 0.0);

    let exp = fixed_expansion(4, 55)?;
    let exact = exp.stability_from_coeffs(0.4);
    let two_point = estimate_two_point(&exp, 0.4, samples, &stream.substream(8))?;
    let e = ctx.within(&two_point, exact);

    let measured = json!({
        "a_direct_vs_dilation": {"direct": direct, "dilation": dil, "agree": a},
        "b_influence_vs_coefficient": {"influence": inf, "minus_sqrt2_coeff": linked, "agree": b},
        "c_gns_vs_stability": {"gns": gns, "from_stability": via_stab, "agree": c},
        "d_zoom_vs_gns": {"mean_zoom_variance": zoom.mean_variance, "twice_gns": twice_gns, "agree": d},
        "e_coefficients_vs_two_point": {"exact": exact, "two_point": two_point, "agree": e},
    });
    Ok((measured, a && b && c && d && e))
}

fn c05(ctx: &Ctx) -> Result<Outcome> {
    let samples = ctx.pick(1_000_000, 250_000);
    let anchors = ctx.pick(2000, 500);
    let (measured, ok) = identity_suite_sized(samples, anchors, &RandomStream::new(5, 0), ctx.k)?;
    Ok(Outcome {
        passed: ok,
        measured,
        tolerance: format!("(a) 5% + {k}σ combined; (b)-(e) {k}σ combined", k = ctx.k),
    })
}

fn c06(ctx: &Ctx) -> Result<Outcome> {
    let h = Halfspace::new(vec![1.0, 0.0, 0.0, 0.0, 0.0], 0.0)?;
    let mut ok = true;
    let mut rows = Vec::new();
    for (i, rho) in [0.05, 0.1, 0.25].into_iter().enumerate() {
        let est = estimate_gns(&h, rho, 1_000_000, &RandomStream::new(6, i as u64))?;
        let exact = sheppard_gns(rho);
        ok &= ctx.within(&est, exact);
        rows.push(json!({"rho": rho, "estimate": est, "exact": exact}));
    }
    Ok(Outcome {
        passed: ok,
        measured: json!(rows),
        tolerance: format!("|MC - arccos(1 - 2rho)/pi| <= {}σ", ctx.k),
    })
}

fn c07(ctx: &Ctx) -> Result<Outcome> {
    let r = (2.0 * 10f64.ln()).sqrt();
    let disk = LpBall::euclidean(2, r)?;
    let (eps, delta) = (0.2, 0.1);
    let cfg = TangentConfig::for_radius(2, r, eps, delta, DirectionMode::DeterministicNet, 1_000_000)?;
    let t = tangent_approximator(&disk, &cfg, &mut RandomStream::new(7, 0))?;
    let d = estimate_distance(&disk, &t.polytope, 1_000_000, &RandomStream::new(7, 1))?;
    let facets = t.polytope.facet_count();
    Ok(Outcome {
        passed: d.value + ctx.k * d.stderr <= eps * delta && facets <= 200,
        measured: json!({"radius": r, "angle": cfg.theta_star, "facets": facets, "distance": d}),
        tolerance: format!("distance + {}σ <= 0.02 and facets <= 200", ctx.k),
    })
}

fn c08(ctx: &Ctx) -> Result<Outcome> {
    let n = 8;
    let seeds = ctx.pick(5u64, 3);
    let samples = ctx.pick(100_000, 30_000);
    let target = ball(n);
    let root = (n as f64).sqrt();
    let mut curve = Vec::new();
    for (j, s) in [64u64, 256, 1024, 4096, 16384].into_iter().enumerate() {
        let mut dists = Vec::new();
        let mut ws = Vec::new();
        for seed in 0..seeds {
            let base = RandomStream::new(800 + seed, j as u64);
            let p = sample_nazarov(n, 1.0, s, &mut base.substream(0))?;
            let fit = GaugeProfile::new(&p, &target, samples, &base.substream(1))?;
            let best = golden_section(|w| fit.distance_at(w).value, 0.5 * root, 10.0 * root, 20);
            let check = GaugeProfile::new(&p, &target, samples, &base.substream(2))?;
            dists.push(check.distance_at(best.x).value);
            ws.push(best.x);
        }
        curve.push(json!({"s": s, "median_distance": median(dists.clone()), "distances": dists, "w": ws}));
    }
    let meds: Vec<f64> = curve.iter().map(|c| c["median_distance"].as_f64().unwrap()).collect();
    let decreasing = meds.windows(2).all(|w| w[1] < w[0]);
    let last = *meds.last().unwrap();
    Ok(Outcome {
        passed: decreasing && last <= 0.25,
        measured: json!({"curve": curve}),
        tolerance: "median distance strictly decreasing in s; <= 0.25 at s = 2^14".into(),
    })
}

fn c09(ctx: &Ctx) -> Result<Outcome> {
    let (n, m, terms) = (128usize, 48usize, 64usize);
    let samples = ctx.pick(1_000_000, 200_000);
    let target = 1.0 - 1.0 / (2.0 * terms as f64);
    let theta = empirical_theta(n, 1.0, m, target, samples, &RandomStream::new(9, 0))?;
    let junta = sample_junta_intersection(n, 1.0, terms, m, theta, &mut RandomStream::new(9, 1))?;
    let l1 = LpBall::canonical(n, 1.0)?;
    let d = estimate_distance(&l1, &junta, samples, &RandomStream::new(9, 2))?;

    let a1 = gaussian_abs_moment(1.0);
    let (mu, sigma) = (n as f64 * a1, (n as f64 * (1.0 - a1 * a1)).sqrt());
    let cut = mu - 2.0 * sigma;
    let counts = map_chunks(samples, &RandomStream::new(9, 3), |mut s, len| {
        let mut x = vec![0.0; n];
        let (mut inner, mut rejected) = (0u64, 0u64);
        for _ in 0..len {
            s.fill_normals(&mut x);
            if x.iter().map(|v| v.abs()).sum::<f64>() <= cut {
                inner += 1;
                rejected += !junta.contains(&x) as u64;
            }
        }
        (inner, rejected)
    });
    let (inner, rejected) = counts.iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let rate = if inner > 0 { rejected as f64 / inner as f64 } else { 0.0 };
    Ok(Outcome {
        passed: d.value <= 0.2 && rate <= 0.05,
        measured: json!({"theta": theta, "distance": d, "inner_probes": inner, "inner_rejection_rate": rate}),
        tolerance: "distance <= 0.2; rejection rate <= 0.05 on |x|_1 <= mu - 2 sigma".into(),
    })
}

fn c10(_ctx: &Ctx) -> Result<Outcome> {
    let mut rows = Vec::new();
    let mut ok = true;
    for n in [16usize, 64, 256, 1024, 4096] {
        for eps in [0.3, 0.1, 0.03] {
            let p = solve_nazarov_params(n, eps)?;
            let ratio = p.scaling_ratio();
            ok &= (0.2..=5.0).contains(&ratio) && p.residual.abs() <= 1e-6;
            rows.push(json!({"n": n, "eps": eps, "w": p.w, "ratio": ratio, "residual": p.residual}));
        }
    }
    Ok(Outcome {
        passed: ok,
        measured: json!(rows),
        tolerance: "ratio in [0.2, 5]; residual <= 1e-6".into(),
    })
}

fn c11(ctx: &Ctx) -> Result<Outcome> {
    let trials = ctx.pick(1_000_000, 200_000);
    let mut draw = RandomStream::new(11, 0);
    let pop: Vec<f64> = (0..2000).map(|_| draw.normal().abs()).collect();
    let hrw = tail_ratio_without_replacement(&pop, 200, &[0.5, 1.0, 2.0], trials, &RandomStream::new(11, 1))?;
    let hrw_ok = hrw.iter().all(|r| (0.5..=2.0).contains(&r.ratio));
    let petrov = iid_tail_check(2.0, 400, &[1.0], trials, &RandomStream::new(11, 2))?.remove(0);
    let threshold = 400.0 + (2.0f64 * 400.0).sqrt();
    let exact_tail = chi2_sf(threshold, 400)?;
    let exact_ratio = exact_tail / phi_sf(1.0);
    let petrov_ok = ctx.within(&petrov.exceed, exact_tail);
    Ok(Outcome {
        passed: hrw_ok && petrov_ok,
        measured: json!({"hrw": hrw, "petrov": petrov, "petrov_exact_ratio": exact_ratio}),
        tolerance: format!("without-replacement ratios in [0.5, 2]; iid ratio within {}σ of the chi-square oracle", ctx.k),
    })
}

/// Analytic inequality grids; `ok` is true when every entry holds.
pub fn tail_grids() -> Result<Value> {
    let gauss: Vec<_> = (1..=16).map(|i| check_gaussian_tail_bound(0.5 * i as f64)).collect::<gaussapprox::Result<_>>()?;
    let mut chi = Vec::new();
    for n in [10usize, 100] {
        for t in [1.0, 5.0, 20.0] {
            chi.push(check_chi2_tail_bound(n, t)?);
        }
    }
    let mut hazard = Vec::new();
    for l in [2.5, 3.0, 4.0, 5.0, 6.0] {
        for b in [l + 0.5, l + 2.0] {
            let a = b + l / (2.0 * (b + 1.0));
            hazard.push(check_hazard_fact(a, b, (-l).exp())?);
        }
    }
    let ok = gauss.iter().all(|g| g.holds())
        && chi.iter().all(|c| c.holds())
        && hazard.iter().all(|h| h.holds_with(HAZARD_CONSTANT));
    Ok(json!({"ok": ok, "gaussian": gauss, "chi2": chi, "hazard": hazard, "hazard_constant": HAZARD_CONSTANT}))
}

fn c12(_ctx: &Ctx) -> Result<Outcome> {
    let v = tail_grids()?;
    Ok(Outcome {
        passed: v["ok"].as_bool() == Some(true),
        tolerance: format!("all 16 + 6 + 10 inequalities hold exactly (hazard constant {HAZARD_CONSTANT})"),
        measured: v,
    })
}

fn c13(ctx: &Ctx) -> Result<Outcome> {
    let jp = solve_junta_params(4096, 1.0, 0.3, JuntaConstants::default())?;
    let formula_terms = jp.m_terms();
    let m_terms = formula_terms.clamp(3.0, 1e6);
    let substituted = m_terms != formula_terms;
    let samples = ctx.pick(1_000_000, 200_000);
    let hits: u64 = map_chunks(samples, &RandomStream::new(13, 0), |mut s, len| {
        let mut g = vec![0.0; jp.m];
        (0..len)
            .filter(|_| {
                s.fill_normals(&mut g);
                g.iter().map(|v| v.abs()).sum::<f64>() <= jp.theta
            })
            .count() as u64
    })
    .iter()
    .sum();
    let vol = Estimate::bernoulli(hits, samples);
    let lower = 1.0 - m_terms.ln() / m_terms;
    let upper = 1.0 - 1.0 / (3.0 * m_terms);
    let slack = ctx.k * vol.stderr;
    Ok(Outcome {
        passed: vol.value >= lower - slack && vol.value <= upper + slack,
        measured: json!({
            "m": jp.m, "m_clamped": jp.m_clamped, "t": jp.t, "theta": jp.theta,
            "term_count": m_terms, "term_count_substituted": substituted,
            "volume": vol, "lower": lower, "upper": upper,
        }),
        tolerance: format!("1 - ln M/M - {k}σ <= Vol <= 1 - 1/(3M) + {k}σ", k = ctx.k),
    })
}

fn c14(ctx: &Ctx) -> Result<Outcome> {
    let (n, s) = (8usize, 16u64);
    let seeds = 5u64;
    let size = ctx.pick(1000, 300);
    let lambdas = [0.5, 0.2, 0.05];
    let w = nazarov_w_for_volume(n, s, 0.5)?;
    let mut per_seed = Vec::new();
    for seed in 0..seeds {
        let p = sample_nazarov(n, w, s, &mut RandomStream::new(1400 + seed, 0))?;
        let c = zoom_collapse_curve(&p, &lambdas, &[0.5], size, size, &RandomStream::new(1400 + seed, 1))?;
        per_seed.push(c.exceedance.iter().map(|row| row[0]).collect::<Vec<f64>>());
    }
    let med: Vec<f64> = (0..lambdas.len()).map(|i| median(per_seed.iter().map(|r| r[i]).collect())).collect();
    let monotone = med.windows(2).all(|w| w[1] <= w[0]);
    Ok(Outcome {
        passed: monotone,
        measured: json!({"w": w, "lambdas": lambdas, "median_exceedance": med, "per_seed": per_seed}),
        tolerance: "median exceedance at tau = 0.5 nonincreasing as lambda decreases".into(),
    })
}

fn c15(_ctx: &Ctx) -> Result<Outcome> {
    let mut runs = Vec::new();
    for threads in [1usize, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        let mut recs = Vec::new();
        for n in [10, 100] {
            let cmd = Command::Volume { body: BodySpec::parse(&format!("l2ball:n={n},r=auto"))? };
            let st = Settings { seed: 1, samples: 1_000_000, threads, out: None };
            recs.extend(pool.install(|| execute(&cmd, &st))?);
        }
        runs.push(recs.iter().map(|r| r.reproducible_part()).collect::<Vec<_>>());
    }
    Ok(Outcome {
        passed: runs[0] == runs[1],
        measured: json!({"threads_1": runs[0], "threads_4": runs[1]}),
        tolerance: "records identical apart from wall time".into(),
    })
}

/// Coefficient-route cross-checks on `B(sqrt n)`: directional influence vs
/// `-sqrt(2)` times the `2 e_1` coefficient, and the level-two diagonal.
pub fn hermite_links(n: usize, samples: u64, stream: &RandomStream) -> Result<Value> {
    let b = ball(n);
    let mut e1 = vec![0.0; n];
    e1[0] = 1.0;
    let inf = estimate_directional_influence(&b, &e1, samples, &stream.substream(0))?;
    let coef = estimate_hermite_coeff(&b, &MultiIndex::axis(n, 0, 2), samples, &stream.substream(1))?;
    let diag = diagonal_level2_coeffs(&b, samples, &stream.substream(2));
    let mut m = Moments::new();
    diag.iter().for_each(|(_, e)| m.push(e.value));
    Ok(json!({
        "influence_e1": inf,
        "minus_sqrt2_coeff": coef.scaled(-SQRT_2),
        "agree": inf.agrees_with(&coef.scaled(-SQRT_2), 3.0, 0.0),
        "diagonal_mean": m.mean(),
        "diagonal": diag,
    }))
}
