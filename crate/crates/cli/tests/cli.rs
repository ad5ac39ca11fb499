use gaussapprox::constructors::{fc_bound_relative, BoundConstants};
use gaussapprox::special::chi_pdf;
use gaussapprox_cli::record::read_jsonl;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaussapprox"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn value(path: &Path, idx: usize) -> serde_json::Value {
    read_jsonl(path).unwrap()[idx].estimates.clone()
}

#[test]
fn identical_bodies_have_zero_distance() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("r.jsonl");
    let o = bin(&[
        "distance", "--a", "l2ball:n=10,r=auto", "--b", "l2ball:n=10,r=auto", "--samples", "1000", "--seed", "1",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let recs = read_jsonl(&out).unwrap();
    assert_eq!(recs[0].v, 1);
    assert_eq!(recs[0].experiment, "distance");
    assert_eq!(recs[0].seed, 1);
    assert_eq!(recs[0].estimates["value"].as_f64(), Some(0.0));
    assert_eq!(recs[0].params["chunk_size"].as_u64(), Some(4096));
    assert_eq!(recs[0].params["a"].as_str(), Some("l2ball:n=10,r=auto"));
}

#[test]
fn ball_influence_record() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("r.jsonl");
    let o = bin(&[
        "influence", "--body", "l2ball:n=64,r=auto", "--samples", "10000000", "--seed", "3", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v = value(&out, 0);
    let (x, se) = (v["value"].as_f64().unwrap(), v["stderr"].as_f64().unwrap());
    let exact = 8.0 * chi_pdf(8.0, 64).unwrap();
    assert!((x - exact).abs() <= 3.0 * se, "{x} vs {exact} (se {se})");
}

#[test]
fn relative_bound_matches_formula() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("r.jsonl");
    let o = bin(&["bounds", "relative", "--n", "32", "--eps", "0.01", "--delta", "1e-9", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let got = value(&out, 0)["log_facets"].as_f64().unwrap();
    assert_eq!(got, fc_bound_relative(32, 0.01, 1e-9, BoundConstants::default()).unwrap());
    let direct = (1e9f64).ln() + 32.0 * ((32.0 / 0.01) * (1e9f64).ln()).ln();
    assert!((got - direct).abs() < 1e-9);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&bin(&["volume", "--body", "l2ball:n=ten"])), 2);
    assert_eq!(code(&bin(&["volume", "--body", "nazarov:n=8,w=6,s=256"])), 2);
    assert_eq!(code(&bin(&["frobnicate"])), 2);
    assert_eq!(code(&bin(&["gns", "--body", "l2ball:n=3", "--rho", "0.7"])), 2);
    // Budget and precondition refusals.
    assert_eq!(code(&bin(&["hermite-project", "--body", "l2ball:n=60", "--degree", "4", "--samples", "10"])), 3);
    assert_eq!(code(&bin(&["verify", "boppana", "--body", "slab:n=3,axis=0,theta=1", "--samples", "10"])), 3);
    assert_eq!(code(&bin(&["bounds", "universal", "--n", "8", "--eps", "0.1"])), 2);
    assert_eq!(code(&bin(&["--help"])), 0);
}

#[test]
fn config_file_and_flag_precedence() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("c.toml");
    let out = d.path().join("r.jsonl");
    std::fs::write(&cfg, format!("seed = 5\nsamples = 2000\nout = {:?}\n", out.to_str().unwrap())).unwrap();
    let o = bin(&["--config", cfg.to_str().unwrap(), "volume", "--body", "l2ball:n=4", "--seed", "9"]);
    assert_eq!(code(&o), 0);
    let r = &read_jsonl(&out).unwrap()[0];
    assert_eq!(r.seed, 9);
    assert_eq!(r.params["samples"].as_u64(), Some(2000));

    std::fs::write(&cfg, "seed = 5\nbogus = 1\n").unwrap();
    assert_eq!(code(&bin(&["--config", cfg.to_str().unwrap(), "volume", "--body", "l2ball:n=4"])), 2);
}

#[test]
fn rerun_reproduces_record() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("r.jsonl");
    let args = ["gns", "--body", "slab:n=4,axis=2,theta=0.7", "--rho", "0.05,0.2", "--samples", "30000", "--seed", "4"];
    for threads in ["1", "3"] {
        let mut a = args.to_vec();
        a.extend(["--threads", threads, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&bin(&a)), 0);
    }
    let r = read_jsonl(&out).unwrap();
    assert_eq!(r[0].reproducible_part(), r[1].reproducible_part());
}

#[test]
fn export_through_cli() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("r.jsonl");
    let csv = d.path().join("r.csv");
    for seed in ["1", "2", "3"] {
        bin(&["volume", "--body", "l2ball:n=3", "--samples", "5000", "--seed", seed, "--out", out.to_str().unwrap()]);
    }
    let o = bin(&["export", "--input", out.to_str().unwrap(), "--columns", "seed,estimates.value", "--output", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "seed,estimates.value");
    let recs = read_jsonl(&out).unwrap();
    for (line, r) in lines[1..].iter().zip(&recs) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v, r.estimates["value"].as_f64().unwrap());
    }
}

#[test]
fn build_and_reload_polytope() {
    let d = tempfile::tempdir().unwrap();
    let p = d.path().join("p.json");
    let o = bin(&["build", "l1-polytope", "--n", "6", "--indices", "1,4,5", "--theta", "2", "--save", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let spec = format!("polytope_file:path={}", p.display());
    let o = bin(&["verify", "boppana", "--body", &spec, "--samples", "20000"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = bin(&["build", "tangent", "--body", "l2ball:n=2,r=2.1459660262893472", "--eps", "0.2", "--delta", "0.1", "--samples", "20000"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn corrupted_acceptance_tolerance_exits_nonzero() {
    let o = bin(&["accept", "--only", "6", "--sigma-override", "6=-1"]);
    assert_eq!(code(&o), 4);
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.lines().count(), 1);
    assert!(text.contains("criterion 06 FAIL"), "{text}");
}
