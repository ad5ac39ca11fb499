//! Command-line surface and experiment dispatch.

use crate::acceptance::{self, SuiteOptions, Tier};
use crate::body_spec::BodySpec;
use crate::config::{FileConfig, Settings};
use crate::export::export_csv;
use crate::record::{append_jsonl, ResultRecord};
use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussapprox::bodies::{l1_junta_to_polytope, save_polytope, Polytope};
use gaussapprox::constructors::{
    fc_bound_bronstein, fc_bound_relative, fc_bound_universal, ray_error_angle, sample_nazarov,
    solve_junta_params, solve_nazarov_params, tangent_approximator, BoundConstants, DirectionMode,
    JuntaConstants, TangentConfig,
};
use gaussapprox::estimate::DEFAULT_CI_LEVEL;
use gaussapprox::estimators::{
    boppana_check, estimate_directional_influence, estimate_distance, estimate_gns_curve,
    estimate_influence_dilation_with, estimate_stability, estimate_total_influence,
    estimate_total_influence_hermite, estimate_volume, iid_tail_check, l2_error, low_degree_projection,
    tail_ratio_without_replacement, zoom_collapse_curve, zoom_variance_profile, DilationScheme,
};
use gaussapprox::mc::CHUNK_SIZE;
use gaussapprox::RandomStream;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser, Debug)]
#[command(name = "gaussapprox", version, about = "Gaussian polytope approximation workbench")]
pub struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo probe count.
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// Worker threads (results do not depend on this).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Append records to this JSONL file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// TOML file with seed, samples, threads, out; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Gaussian volume of a body.
    Volume {
        #[arg(long)]
        body: BodySpec,
    },
    /// Gaussian measure of the symmetric difference.
    Distance {
        #[arg(long)]
        a: BodySpec,
        #[arg(long)]
        b: BodySpec,
    },
    /// Total (or directional) convex influence.
    Influence(InfluenceArgs),
    /// Noise sensitivity at one or more noise rates.
    Gns {
        #[arg(long)]
        body: BodySpec,
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        rho: Vec<f64>,
    },
    /// Noise stability of the +-1 indicator at a correlation.
    Stability {
        #[arg(long)]
        body: BodySpec,
        #[arg(long)]
        rho: f64,
    },
    /// Random-zoom variance profile.
    Zoom {
        #[arg(long)]
        body: BodySpec,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 1000)]
        anchors: usize,
        #[arg(long, default_value_t = 1000)]
        inner: usize,
    },
    /// Exceedance of zoom variance across lambdas.
    ZoomCollapse {
        #[arg(long)]
        body: BodySpec,
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.2,0.05")]
        lambdas: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0.5")]
        thresholds: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        anchors: usize,
        #[arg(long, default_value_t = 1000)]
        inner: usize,
    },
    /// Construct approximating bodies.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Closed-form facet-count bounds (natural logs).
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Verifiers for tail facts, sampling theorems and identities.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Low-degree Hermite projection of a body's indicator.
    HermiteProject {
        #[arg(long)]
        body: BodySpec,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Write selected record fields to CSV.
    Export {
        #[arg(long)]
        input: PathBuf,
        /// Dotted paths, e.g. estimates.value,params.body
        #[arg(long, value_delimiter = ',', required = true)]
        columns: Vec<String>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run the acceptance suite.
    Accept {
        #[arg(long, value_enum, default_value_t = Tier::Fast)]
        tier: Tier,
        /// Run only these criteria.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Test fixture: `ID=K` replaces the sigma multiplier of one criterion.
        #[arg(long, hide = true)]
        sigma_override: Vec<String>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct InfluenceArgs {
    #[arg(long)]
    pub body: BodySpec,
    #[arg(long, value_enum, default_value_t = InfluenceMethod::Direct)]
    pub method: InfluenceMethod,
    /// Dilation step.
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = Scheme::Forward)]
    pub scheme: Scheme,
    /// Coordinate axis for a directional influence (direct method only).
    #[arg(long)]
    pub axis: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfluenceMethod {
    Direct,
    Dilation,
    Hermite,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Forward,
    Richardson,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NetMode {
    Net,
    Random,
}

#[derive(Subcommand, Debug, Clone)]
pub enum BuildCmd {
    /// Solve Nazarov parameters (`--eps`) and/or draw a polytope (`--w --s`).
    Nazarov {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, requires = "s")]
        w: Option<f64>,
        #[arg(long, requires = "w")]
        s: Option<u64>,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Solve junta parameters.
    Junta {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        c2: f64,
        #[arg(long, default_value_t = 1.0)]
        c3: f64,
        #[arg(long, default_value_t = 1.0)]
        l1_m: f64,
        #[arg(long, default_value_t = 1.0)]
        l1_t: f64,
    },
    /// Tangent-hyperplane approximator of a body with a support functional.
    Tangent {
        #[arg(long)]
        body: BodySpec,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        /// Net angle; defaults to the ray-error angle at the support value along e1.
        #[arg(long)]
        angle: Option<f64>,
        #[arg(long, value_enum, default_value_t = NetMode::Net)]
        mode: NetMode,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// The 2^m-facet polytope of one l1 junta term.
    L1Polytope {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum BoundsCmd {
    Universal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        constant: f64,
    },
    Relative {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        constant: f64,
    },
    Bronstein {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum VerifyCmd {
    /// Analytic tail inequality grids.
    Tails,
    /// Without-replacement tail ratios on a centered |g| population.
    Hrw {
        #[arg(long, default_value_t = 2000)]
        population: usize,
        #[arg(long, default_value_t = 200)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
        t: Vec<f64>,
    },
    /// Tail ratios for sums of |g|^p.
    Petrov {
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 400)]
        m: usize,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        z: Vec<f64>,
    },
    /// Influence upper bound for a polytope body.
    Boppana {
        #[arg(long)]
        body: BodySpec,
    },
    /// Coefficient-route cross-checks on a Euclidean ball.
    Hermite {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// The two-route identity suite.
    Identities,
}

/// One executed experiment.
fn record(experiment: &str, settings: &Settings, mut params: Value, estimates: Value, start: Instant) -> ResultRecord {
    let obj = params.as_object_mut().expect("params are an object");
    obj.insert("samples".into(), json!(settings.samples));
    obj.insert("chunk_size".into(), json!(CHUNK_SIZE));
    obj.insert("ci_level".into(), json!(DEFAULT_CI_LEVEL));
    ResultRecord::new(experiment, params, estimates, settings.seed, start.elapsed().as_millis() as u64)
}

/// Runs one command; `Export` and `Accept` are handled by [`run`].
pub fn execute(cmd: &Command, st: &Settings) -> Result<Vec<ResultRecord>> {
    let t0 = Instant::now();
    let stream = RandomStream::new(st.seed, 0);
    let n = st.samples;
    let rec = |name: &str, params: Value, est: Value| Ok(vec![record(name, st, params, est, t0)]);
    match cmd {
        Command::Volume { body } => {
            let b = body.build()?;
            rec("volume", json!({"body": body.render()}), json!(estimate_volume(&*b, n, &stream)))
        }
        Command::Distance { a, b } => {
            let (ka, kb) = (a.build()?, b.build()?);
            let d = estimate_distance(&*ka, &*kb, n, &stream)?;
            rec("distance", json!({"a": a.render(), "b": b.render()}), json!(d))
        }
        Command::Influence(args) => {
            let b = args.body.build()?;
            let mut params = json!({"body": args.body.render(), "method": format!("{:?}", args.method).to_lowercase()});
            let est = match (args.method, args.axis) {
                (InfluenceMethod::Direct, Some(i)) => {
                    if i >= b.dim() {
                        return Err(gaussapprox::Error::Parameter(format!("axis {i} out of range")).into());
                    }
                    params["axis"] = json!(i);
                    let mut v = vec![0.0; b.dim()];
                    v[i] = 1.0;
                    estimate_directional_influence(&*b, &v, n, &stream)?
                }
                (_, Some(_)) => bail!(gaussapprox::Error::Parameter("--axis needs --method direct".into())),
                (InfluenceMethod::Direct, None) => estimate_total_influence(&*b, n, &stream),
                (InfluenceMethod::Hermite, None) => estimate_total_influence_hermite(&*b, n, &stream),
                (InfluenceMethod::Dilation, None) => {
                    let scheme = match args.scheme {
                        Scheme::Forward => DilationScheme::Forward,
                        Scheme::Richardson => DilationScheme::Richardson,
                    };
                    params["delta"] = json!(args.delta);
                    params["scheme"] = json!(scheme);
                    estimate_influence_dilation_with(&*b, args.delta, scheme, n, &stream)?
                }
            };
            rec("influence", params, json!(est))
        }
        Command::Gns { body, rho } => {
            let b = body.build()?;
            let est = estimate_gns_curve(&*b, rho, n, &stream)?;
            rec("gns", json!({"body": body.render(), "rho": rho}), json!(est))
        }
        Command::Stability { body, rho } => {
            let b = body.build()?;
            let est = estimate_stability(&*b, *rho, n, &stream)?;
            rec("stability", json!({"body": body.render(), "rho": rho}), json!(est))
        }
        Command::Zoom { body, lambda, anchors, inner } => {
            let b = body.build()?;
            let prof = zoom_variance_profile(&*b, *lambda, *anchors, *inner, &stream)?;
            let params = json!({"body": body.render(), "lambda": lambda, "anchors": anchors, "inner": inner});
            rec("zoom", params, json!({"mean_variance": prof.mean_variance, "quantiles": prof.quantiles}))
        }
        Command::ZoomCollapse { body, lambdas, thresholds, anchors, inner } => {
            let b = body.build()?;
            let c = zoom_collapse_curve(&*b, lambdas, thresholds, *anchors, *inner, &stream)?;
            let params = json!({"body": body.render(), "lambdas": lambdas, "thresholds": thresholds, "anchors": anchors, "inner": inner});
            rec("zoom_collapse", params, json!(c))
        }
        Command::HermiteProject { body, degree } => {
            let b = body.build()?;
            let p = low_degree_projection(&*b, *degree, n, &stream)?;
            let err = l2_error(&p.expansion, &*b, n, &stream.substream(1))?;
            let coeffs: Vec<Value> = p.estimates.iter().map(|(a, e)| json!({"alpha": a.0, "estimate": e})).collect();
            rec("hermite_project", json!({"body": body.render(), "degree": degree}), json!({"coefficients": coeffs, "l2_error": err}))
        }
        Command::Build(b) => build(b, st, &stream, t0),
        Command::Bounds(b) => {
            let (name, params, v) = match b {
                BoundsCmd::Universal { n, eps, constant } => {
                    let c = BoundConstants { universal: *constant, ..Default::default() };
                    ("bounds_universal", json!({"n": n, "eps": eps, "constant": constant}), fc_bound_universal(*n, *eps, c)?)
                }
                BoundsCmd::Relative { n, eps, delta, constant } => {
                    let c = BoundConstants { relative: *constant, ..Default::default() };
                    ("bounds_relative", json!({"n": n, "eps": eps, "delta": delta, "constant": constant}), fc_bound_relative(*n, *eps, *delta, c)?)
                }
                BoundsCmd::Bronstein { n, eps } => ("bounds_bronstein", json!({"n": n, "eps": eps}), fc_bound_bronstein(*n, *eps)?),
            };
            rec(name, params, json!({"log_facets": v}))
        }
        Command::Verify(v) => verify(v, st, &stream, t0),
        Command::Export { .. } | Command::Accept { .. } => Err(anyhow!("not an experiment")),
    }
}

fn build(cmd: &BuildCmd, st: &Settings, stream: &RandomStream, t0: Instant) -> Result<Vec<ResultRecord>> {
    let save = |p: &Polytope, path: &Option<PathBuf>| -> Result<()> {
        if let Some(path) = path {
            save_polytope(p, path)?;
        }
        Ok(())
    };
    let (name, params, est) = match cmd {
        BuildCmd::Nazarov { n, eps, w, s, save: path } => {
            let mut out = json!({});
            if let Some(eps) = eps {
                out["solved"] = json!(solve_nazarov_params(*n, *eps)?);
            }
            if let (Some(w), Some(s)) = (w, s) {
                let mut draw = stream.substream(0);
                let p = sample_nazarov(*n, *w, *s, &mut draw)?;
                save(&p, path)?;
                out["facets"] = json!(p.facet_count());
                out["volume"] = json!(estimate_volume(&p, st.samples, &stream.substream(1)));
            }
            if eps.is_none() && w.is_none() {
                bail!(gaussapprox::Error::Parameter("build nazarov needs --eps or --w/--s".into()));
            }
            ("build_nazarov", json!({"n": n, "eps": eps, "w": w, "s": s}), out)
        }
        BuildCmd::Junta { n, p, eps, c2, c3, l1_m, l1_t } => {
            let c = JuntaConstants { c2: *c2, c3: *c3, l1_m: *l1_m, l1_t: *l1_t };
            let jp = solve_junta_params(*n, *p, *eps, c)?;
            ("build_junta", json!({"n": n, "p": p, "eps": eps, "constants": c}), json!(jp))
        }
        BuildCmd::Tangent { body, eps, delta, angle, mode, budget, save: path } => {
            let b = body.build()?;
            let dim = b.dim();
            let theta = match angle {
                Some(a) => *a,
                None => {
                    let e1: Vec<f64> = (0..dim).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
                    let ell = b.support(&e1).filter(|l| l.is_finite()).ok_or_else(|| {
                        gaussapprox::Error::Parameter("no finite support along e1; pass --angle".into())
                    })?;
                    ray_error_angle(ell, dim, *eps)?
                }
            };
            let dm = match mode {
                NetMode::Net => DirectionMode::DeterministicNet,
                NetMode::Random => DirectionMode::RandomDirections,
            };
            let cfg = TangentConfig::with_angle(*eps, *delta, theta, dm, *budget)?;
            let mut draw = stream.substream(0);
            let t = tangent_approximator(&*b, &cfg, &mut draw)?;
            save(&t.polytope, path)?;
            let d = estimate_distance(&*b, &t.polytope, st.samples, &stream.substream(1))?;
            let params = json!({"body": body.render(), "eps": eps, "delta": delta, "angle": theta, "mode": dm, "budget": budget, "tau": cfg.tau, "k_star": cfg.k_star});
            ("build_tangent", params, json!({"facets": t.polytope.facet_count(), "approximation": t, "distance": d}))
        }
        BuildCmd::L1Polytope { n, indices, theta, save: path } => {
            let p = l1_junta_to_polytope(*n, indices, *theta)?;
            save(&p, path)?;
            ("build_l1_polytope", json!({"n": n, "indices": indices, "theta": theta}), json!({"facets": p.facet_count()}))
        }
    };
    Ok(vec![record(name, st, params, est, t0)])
}

fn verify(cmd: &VerifyCmd, st: &Settings, stream: &RandomStream, t0: Instant) -> Result<Vec<ResultRecord>> {
    let (name, params, est) = match cmd {
        VerifyCmd::Tails => ("verify_tails", json!({}), acceptance::tail_grids()?),
        VerifyCmd::Hrw { population, m, t } => {
            let mut draw = stream.substream(0);
            let pop: Vec<f64> = (0..*population).map(|_| draw.normal().abs()).collect();
            let r = tail_ratio_without_replacement(&pop, *m, t, st.samples, &stream.substream(1))?;
            ("verify_hrw", json!({"population": population, "m": m, "t": t}), json!(r))
        }
        VerifyCmd::Petrov { p, m, z } => {
            let r = iid_tail_check(*p, *m, z, st.samples, stream)?;
            ("verify_petrov", json!({"p": p, "m": m, "z": z}), json!(r))
        }
        VerifyCmd::Boppana { body } => {
            let p = body.build_polytope()?;
            let r = boppana_check(&p, st.samples, stream)?;
            ("verify_boppana", json!({"body": body.render()}), json!(r))
        }
        VerifyCmd::Hermite { n } => ("verify_hermite", json!({"n": n}), acceptance::hermite_links(*n, st.samples, stream)?),
        VerifyCmd::Identities => ("verify_identities", json!({}), acceptance::identity_suite(st.samples, stream, 3.0)?.0),
    };
    Ok(vec![record(name, st, params, est, t0)])
}

fn one_line(r: &ResultRecord) -> String {
    let v = &r.estimates;
    let summary = match v.get("value") {
        Some(x) => format!("value={} stderr={}", x, v.get("stderr").cloned().unwrap_or(Value::Null)),
        None => {
            let s = v.to_string();
            if s.len() > 160 {
                format!("{}...", &s[..160])
            } else {
                s
            }
        }
    };
    format!("{} {} ({} ms)", r.experiment, summary, r.wall_time_ms)
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const REFUSED: i32 = 3;
    pub const ACCEPTANCE: i32 = 4;
}

/// Maps an error to its exit code.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if let Some(g) = cause.downcast_ref::<gaussapprox::Error>() {
            return if g.is_input_error() { exit::INPUT } else { exit::REFUSED };
        }
        if cause.is::<crate::body_spec::SpecError>() || cause.is::<crate::config::ConfigError>() {
            return exit::INPUT;
        }
    }
    exit::OTHER
}

fn parse_overrides(items: &[String]) -> Result<Vec<(u8, f64)>> {
    items
        .iter()
        .map(|s| {
            let (id, k) = s.split_once('=').ok_or_else(|| anyhow!("override must be ID=K, got {s}"))?;
            Ok((id.parse()?, k.parse()?))
        })
        .collect::<Result<_>>()
        .map_err(|e: anyhow::Error| gaussapprox::Error::Parameter(e.to_string()).into())
}

/// Parses arguments, runs, prints, and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::INPUT } else { exit::OK };
            let _ = e.print();
            return code;
        }
    };
    match run_cli(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}

fn run_cli(cli: Cli) -> Result<i32> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let st = Settings::resolve(cli.seed, cli.samples, cli.threads, cli.out.clone(), &file);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(st.threads).build()?;
    pool.install(|| match &cli.command {
        Command::Export { input, columns, output } => {
            let rows = export_csv(input, columns, output)?;
            println!("wrote {rows} rows to {}", output.display());
            Ok(exit::OK)
        }
        Command::Accept { tier, only, sigma_override } => {
            let opts = SuiteOptions {
                tier: *tier,
                only: only.clone(),
                sigma_overrides: parse_overrides(sigma_override)?,
            };
            let report = acceptance::run_suite_with(&opts, |c| println!("{}", c.line()));
            if let Some(path) = &st.out {
                let t0 = Instant::now();
                let r = record("accept", &st, json!({"tier": tier, "only": only}), json!(report), t0);
                append_jsonl(path, &[r])?;
            }
            Ok(if report.all_passed() { exit::OK } else { exit::ACCEPTANCE })
        }
        cmd => {
            let recs = execute(cmd, &st)?;
            for r in &recs {
                println!("{}", one_line(r));
            }
            if let Some(path) = &st.out {
                append_jsonl(path, &recs)?;
            }
            Ok(exit::OK)
        }
    })
}
