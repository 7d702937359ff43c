use std::f64::consts::FRAC_PI_2;
use std::process::{Command, Output};

use serde_json::Value;
use zolotarev::cli::fit_slope;
use zolotarev::elliptic::{solve_lambda, EllipticModulus};

const BIN: &str = env!("CARGO_BIN_EXE_zolotarev");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn num(v: &Value) -> f64 {
    match v {
        Value::Number(n) => n.as_f64().unwrap(),
        Value::String(s) if s == "inf" => f64::INFINITY,
        other => panic!("not a number: {other}"),
    }
}

#[test]
fn build_examples() {
    let v = json(&["build", "--problem", "z6", "--degree", "1", "--theta", "1.0"]);
    assert_eq!(v["command"], "build");
    assert_eq!(v["results"]["factor_params"].as_array().unwrap().len(), 1);
    assert_eq!(num(&v["results"]["factor_params"][0]), 0.0);
    assert!((num(&v["results"]["predicted_error"]) - 1.0).abs() < 1e-15);

    let v = json(&["build", "--problem", "z6", "--degree", "0", "--theta", "1.0"]);
    assert_eq!(v["results"]["quarter_turns"], 1);
    assert!(v["results"]["factor_params"].as_array().unwrap().is_empty());
    assert_eq!(num(&v["results"]["predicted_error"]), FRAC_PI_2);

    let v = json(&["build", "--problem", "z5", "--degree", "3", "--theta", "1.2"]);
    let want = solve_lambda(1.2_f64.cos(), 7).unwrap().lambda();
    assert_eq!(num(&v["results"]["lambda"]), want);
    assert_eq!(v["results"]["exact_type"], serde_json::json!([3, 3]));

    let v = json(&["build", "--problem", "z4", "--degree", "3", "--ell", "0.3"]);
    let lam = num(&v["results"]["lambda"]);
    assert!((num(&v["results"]["predicted_error"]) - (1.0 - lam) / (1.0 + lam)).abs() < 1e-15);

    let v = json(&["build", "--problem", "z6", "--degree", "4", "--ell", "0.5"]);
    assert!((num(&v["inputs"]["theta"]) - 0.5_f64.acos()).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    for theta in ["0", "1e-9", "1.57079632", "2", "-1", "nan"] {
        assert_eq!(code(&["build", "--problem", "z6", "--degree", "2", "--theta", theta]), 2, "theta={theta}");
    }
    assert_eq!(code(&["build", "--problem", "z6", "--degree", "2", "--theta", "1.0", "--ell", "0.5"]), 2);
    assert_eq!(code(&["build", "--problem", "z6", "--degree", "-1", "--theta", "1.0"]), 2);
    assert_eq!(code(&["bounds", "--problem", "z6", "--max-degree", "65", "--theta", "1.0"]), 2);
    assert_eq!(code(&["error", "--problem", "z6", "--degree", "3", "--theta", "1.0", "--grid", "63"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["--help"]), 0);

    let out = run(&["build", "--problem", "z4", "--degree", "0", "--ell", "0.3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("m = 0"));
    let out = run(&["compose", "--m", "0", "--m-tilde", "2", "--theta", "1.0"]);
    assert_eq!(out.status.code(), Some(3));

    let out = run(&["contour", "--problem", "z5", "--degree", "2", "--theta", "1.0", "--resolution", "16", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/dir/x.csv"));
}

#[test]
fn error_reports() {
    let v = json(&["error", "--problem", "z6", "--degree", "3", "--theta", "1.0"]);
    let r = &v["results"];
    assert!((num(&r["measured"]) - num(&r["predicted"])).abs() < 1e-9);
    assert_eq!(r["equioscillates"], true);
    for arc in r["arcs"].as_array().unwrap() {
        assert_eq!(arc["alternations"], 4);
        assert_eq!(arc["endpoints_attained"], true);
    }
    let v = json(&["error", "--problem", "z5", "--degree", "2", "--theta", "0.8", "--grid", "128"]);
    assert_eq!(v["results"]["arcs"][0]["alternations"], 6);
    assert_eq!(v["inputs"]["grid"], 128);
    let v = json(&["error", "--problem", "z4", "--degree", "4", "--ell", "0.2"]);
    assert_eq!(v["results"]["arcs"][0]["alternations"], 5);
}

#[test]
fn bounds_table() {
    let theta = 0.9;
    let v = json(&["bounds", "--problem", "z6", "--max-degree", "24", "--theta", "0.9"]);
    let r = &v["results"];
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 25);
    assert_eq!(num(&rows[0]["measured"]), FRAC_PI_2);
    for row in rows {
        assert_eq!(row["holds"], true);
        let (m, b1, b2) = (num(&row["measured"]), num(&row["bound_rho"]), num(&row["bound_secant"]));
        assert!(m <= b1 && b1 <= b2, "{row}");
    }
    assert_eq!(r["all_hold"], true);
    let log_rho = EllipticModulus::from_angle(theta).unwrap().log_rho();
    let slope = num(&r["fitted_slope"]);
    assert!((slope / (-0.5 * log_rho) - 1.0).abs() <= 0.05, "{slope}");
    assert_eq!(r["slope_within_tolerance"], true);

    let out = run(&["bounds", "--problem", "z5", "--max-degree", "6", "--theta", "0.9", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("degree,measured,bound_rho,bound_secant"));
    assert_eq!(lines.count(), 7);

    assert_eq!(fit_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]), Some(2.0));
    assert_eq!(fit_slope(&[1.0], &[1.0]), None);
}

#[test]
fn compose_examples() {
    let cases: [(&[&str], f64); 5] = [
        (&["--m", "3", "--m-tilde", "3", "--theta", "1.5607963267948966"], 1e-9),
        (&["--m", "3", "--m-tilde", "1", "--theta", "0.7"], 1e-13),
        (&["--m", "3", "--m-tilde", "2", "--theta", "1.0"], 1e-9),
        (&["--problem", "z5", "--m", "2", "--m-tilde", "1", "--theta", "1.0"], 1e-9),
        (&["--problem", "z4", "--m", "2", "--m-tilde", "3", "--ell", "0.4"], 1e-10),
    ];
    for (args, tol) in cases {
        let mut full = vec!["compose"];
        full.extend_from_slice(args);
        let v = json(&full);
        assert!(num(&v["results"]["max_residual"]) <= tol, "{args:?}");
        assert_eq!(v["results"]["passed"], true);
    }
    let v = json(&["compose", "--m", "3", "--m-tilde", "2", "--theta", "1.0"]);
    assert_eq!(v["results"]["target_degree"], 6);
    assert_eq!(v["results"]["points"], 200 + 64);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["build", "--problem", "z6", "--degree", "7", "--theta", "1.1"][..],
        &["error", "--problem", "z5", "--degree", "3", "--theta", "1.1"][..],
        &["bounds", "--problem", "z6", "--max-degree", "8", "--theta", "1.1", "--format", "csv"][..],
        &["contour", "--problem", "z6", "--degree", "5", "--theta", "1.1", "--resolution", "32"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let p = path.to_str().unwrap();
    let out = run(&["contour", "--problem", "z5", "--degree", "3", "--theta", "1.0", "--resolution", "16", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("re,im,value\n"));
    assert_eq!(text.lines().count(), 1 + 16 * 16);
    assert!(!text.contains('\r'));
}
