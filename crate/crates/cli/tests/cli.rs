use std::process::{Command, Output};

use fracstable_cli::args::{parse_points, parse_seed};
use fracstable_cli::{resolve_seed, run, DEFAULT_SEED, SEED_ENV};
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fracstable"));
    c.env_remove(SEED_ENV);
    c
}

fn exec(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

/// In-process run: (exit code, stdout, stderr).
fn call(args: &[&str], env_seed: Option<&str>) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fracstable").chain(args.iter().copied());
    let code = run(argv, env_seed, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

/// Data rows of a CSV output, comment line and header skipped.
fn csv_rows(s: &str) -> Vec<Vec<String>> {
    s.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(s: &str) -> &str {
    s.lines().next().unwrap()
}

#[test]
fn ml_against_exact_gamma_values() {
    // Γ(1.5n + 1) is (3m)! for n = 2m and Γ(k + 1/2) = (2k)! √π / (4^k k!) with k = 3m + 2 for n = 2m + 1
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    let g = |n: u32| {
        if n % 2 == 0 {
            fact(3 * n / 2)
        } else {
            let k = 3 * (n - 1) / 2 + 2;
            fact(2 * k) * std::f64::consts::PI.sqrt() / (4f64.powi(k as i32) * fact(k))
        }
    };
    let want: f64 = (0..60).map(|n| 2f64.powi(n as i32) / g(n)).sum();
    let o = exec(&["ml", "--alpha", "1.5", "--x", "2", "--deriv", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(header(&s).contains("seed=12648430"), "{s}");
    let rows = csv_rows(&s);
    assert_eq!(rows.len(), 1);
    let v: f64 = rows[0][1].parse().unwrap();
    assert!((v - want).abs() <= 1e-14 * want, "{v} {want}");
    assert_eq!(rows[0][2], "series");
    let bound: f64 = rows[0][4].parse().unwrap();
    assert!(bound >= 0.0 && bound < 1e-12);
}

#[test]
fn csv_has_seventeen_significant_digits() {
    let (code, s, _) = call(&["moments", "--law", "v", "--alpha", "1.5", "--s", "0.5"], None);
    assert_eq!(code, 0);
    let rows = csv_rows(&s);
    let mant = rows[0][1].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mant.len(), 17, "{}", rows[0][1]);
}

#[test]
fn factorization_report_schema() {
    let o = exec(&["verify", "factorization", "--alpha", "1.5", "--s", "0.25,0.5,0.75"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "alpha",
            "check",
            "grid",
            "max_abs_residual",
            "params",
            "passed",
            "residuals",
            "runtime_ms",
            "seed",
            "tolerance"
        ]
    );
    assert_eq!(v["passed"], true);
    assert_eq!(v["seed"], DEFAULT_SEED);
    assert!(v["max_abs_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn unreachable_tolerance_exits_two_with_report() {
    let o = exec(&["verify", "intertwining", "--alpha", "1.5", "--fn", "gauss", "--grid", "0.1:5:25", "--tol", "1e-15"]);
    assert_eq!(o.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["grid"].as_array().unwrap().len(), 25);
    assert_eq!(v["tolerance"], 1e-15);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["ml", "--alpha", "1.5", "--x", "1", "--bogus"][..],
        &["nosuch"],
        &["verify", "factorization", "--alpha", "1.5", "--s", "0.5", "--tol", "1e-3"],
        &["verify", "cm", "--alpha", "1.5"],
        &["density", "--law", "valpha", "--alpha", "1.5", "--t", "1:2"],
    ] {
        let o = exec(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
    let o = exec(&["ml", "--wat"]);
    assert!(String::from_utf8(o.stderr).unwrap().contains("Usage"));
}

#[test]
fn evaluation_errors_exit_one() {
    let (code, out, err) = call(&["moments", "--law", "xhat", "--alpha", "1.5", "--s", "1.7"], None);
    assert_eq!(code, 1);
    assert!(out.is_empty() && err.contains("error"));
    let (code, _, _) = call(&["fracop", "--op", "caputo", "--alpha", "1.5", "--fn", "nope", "--x", "1"], None);
    assert_eq!(code, 1);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = call(&["--help"], None);
    assert_eq!(code, 0);
    assert!(out.contains("calibrate-bias"));
}

#[test]
fn valpha_density_round_trip() {
    // log-spaced grid; trapezoid in ln t
    let a = "1.8";
    let n = 2401;
    let ts: Vec<f64> = (0..n).map(|i| 10f64.powf(-8.0 + 16.0 * i as f64 / (n - 1) as f64)).collect();
    let list: Vec<String> = ts.iter().map(|t| format!("{t:e}")).collect();
    let list = list.join(",");
    let (code, s, err) = call(&["density", "--law", "valpha", "--alpha", a, "--t", &list], None);
    assert_eq!(code, 0, "{err}");
    let pts: Vec<(f64, f64)> = csv_rows(&s).iter().map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    assert_eq!(pts.len(), n);
    let mut mass = 0.0;
    for w in pts.windows(2) {
        let h = (w[1].0 / w[0].0).ln();
        mass += 0.5 * h * (w[0].0 * w[0].1 + w[1].0 * w[1].1);
    }
    assert!((mass - 1.0).abs() < 1e-4, "{mass}");
}

#[test]
fn seed_resolution() {
    assert_eq!(resolve_seed(Some(5), Some("7")).unwrap(), 5);
    assert_eq!(resolve_seed(None, Some("7")).unwrap(), 7);
    assert_eq!(resolve_seed(None, Some("0xff")).unwrap(), 255);
    assert_eq!(resolve_seed(None, None).unwrap(), 0xC0FFEE);
    assert!(resolve_seed(None, Some("x1")).is_err());

    let env = bin().env(SEED_ENV, "99").args(["sample", "--law", "valpha", "--alpha", "1.5", "--n", "5"]).output().unwrap();
    let flag = exec(&["sample", "--law", "valpha", "--alpha", "1.5", "--n", "5", "--seed", "99"]);
    assert_eq!(env.stdout, flag.stdout);
    assert!(String::from_utf8(flag.stdout).unwrap().contains("seed=99"));
    let bad = bin().env(SEED_ENV, "nope").args(["sample", "--law", "valpha", "--alpha", "1.5"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn identical_argv_identical_bytes() {
    let runs: [&[&str]; 5] = [
        &["sample", "--law", "stable-increment", "--alpha", "1.3", "--n", "500", "--seed", "4"],
        &["sample", "--law", "xhat", "--alpha", "1.7", "--n", "500", "--format", "json"],
        &["simulate", "--alpha", "1.5", "--reflect", "inf", "--steps", "64", "--paths", "300", "--refine", "8"],
        &["verify", "laplace", "--alpha", "1.5", "--n", "20000", "--no-timing"],
        &["calibrate-bias", "--alpha", "1.5", "--ladder", "4,16,64", "--paths", "500", "--format", "csv"],
    ];
    for args in runs {
        let a = exec(args);
        let b = exec(args);
        assert_eq!(a.status.code(), Some(0), "{args:?} {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = call(&["sample", "--law", "pos-stable", "--alpha", "1.5", "--n", "50"], Some("1")).1;
    let b = call(&["sample", "--law", "pos-stable", "--alpha", "1.5", "--n", "50"], Some("2")).1;
    assert_ne!(csv_rows(&a), csv_rows(&b));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = call(&["moments", "--law", "iminus", "--alpha", "1.5", "--s", "0", "--format", "json", "-o", p], None);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["rows"][0]["moment"], 1.0);
    assert_eq!(v["seed"], DEFAULT_SEED);
}

#[test]
fn every_subcommand_runs() {
    let runs: [&[&str]; 12] = [
        &["fracop", "--op", "rl-right", "--alpha", "1.5", "--x", "0.5,1"],
        &["fracop", "--op", "generator", "--alpha", "1.5", "--x", "1", "--c-plus", "0.2", "--c-minus", "0.3"],
        &["fracop", "--op", "rl-left-am1", "--alpha", "1.5", "--fn", "x2exp", "--x", "1"],
        &["density", "--law", "zbeta", "--alpha", "1.5", "--t", "0.5:2:4"],
        &["moments", "--law", "x", "--alpha", "1.5", "--s", "-0.2,0.5"],
        &["sample", "--law", "xhat", "--alpha", "1.5", "--n", "10"],
        &["simulate", "--alpha", "1.5", "--steps", "16", "--paths", "10"],
        &["verify", "cm", "--alpha", "1.5", "--target", "recip-ml", "--grid", "0.5,2"],
        &["verify", "resolvent", "--alpha", "1.5", "--part", "mass", "--grid", "0.5"],
        &["verify", "lamperti", "--alpha", "1.5", "--lambda", "1"],
        &["verify", "rep", "--alpha", "1.5", "--grid", "1", "--format", "csv"],
        &["verify", "identity-law", "--alpha", "1.5", "--n-exact", "4000", "--paths", "1000", "--steps", "256", "--calibration-paths", "1000"],
    ];
    for args in runs {
        let (code, out, err) = call(args, None);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert!(out.contains("seed"), "{args:?}");
    }
}

#[test]
fn fracop_generator_matches_delta_plus() {
    let g = call(&["fracop", "--op", "generator", "--alpha", "1.5", "--x", "0.7", "--format", "json"], None).1;
    let d = call(&["fracop", "--op", "delta-plus", "--alpha", "1.5", "--x", "0.7", "--format", "json"], None).1;
    let g: Value = serde_json::from_str(&g).unwrap();
    let d: Value = serde_json::from_str(&d).unwrap();
    let (g, d) = (g["rows"][0]["value"].as_f64().unwrap(), d["rows"][0]["value"].as_f64().unwrap());
    assert!((g - d).abs() <= 1e-8 * d.abs(), "{g} {d}");
}

#[test]
fn point_syntax() {
    assert_eq!(parse_points("1,2.5,-3").unwrap(), vec![1.0, 2.5, -3.0]);
    assert_eq!(parse_points("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
    assert_eq!(parse_points("2:9:1").unwrap(), vec![2.0]);
    assert!(parse_points("0:1:0").is_err());
    assert!(parse_points("0:1").is_err());
    assert!(parse_points("a").is_err());
    assert_eq!(parse_seed("0xC0FFEE").unwrap(), 12648430);
}
