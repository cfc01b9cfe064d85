use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn tcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tcone")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("one JSON document on stdout")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn witness_on_universal_t2_is_entangled() {
    let t2 = data("t2.json");
    let out = tcone(&["witness", "--input", t2.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["command"], "witness");
    assert_eq!(r["outcome"]["status"], "entangled");
    assert_eq!(r["outcome"]["certificate"]["valid"], true);
    assert!(r["outcome"]["certificate"]["lp_margin"].as_f64().unwrap() >= 1e-6);
}

#[test]
fn witness_report_is_reproducible() {
    let t2 = data("t2.json");
    let a = tcone(&["witness", "--input", t2.to_str().unwrap(), "--seed", "7"]);
    let b = tcone(&["witness", "--input", t2.to_str().unwrap(), "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["seed"], 7);
}

#[test]
fn rn_decompose_three() {
    let out = tcone(&["rn-decompose", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outcome"]["atoms"].as_array().unwrap().len(), 7);
    assert!(r["outcome"]["residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn cp_check_twist() {
    let map = data("twist2.json");
    let out = tcone(&["cp-check", "--map", map.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert!((r["outcome"]["min_eigenvalue"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    let v: Vec<[f64; 2]> = serde_json::from_value(r["outcome"]["violating_vector"].clone()).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let sign = v[0][0].signum();
    let expected = [[s, 0.0], [0.0, 0.0], [0.0, 0.0], [-s, 0.0]];
    for (got, want) in v.iter().zip(&expected) {
        assert!((got[0] * sign - want[0]).abs() < 1e-9 && (got[1] * sign - want[1]).abs() < 1e-9);
    }
}

#[test]
fn usage_and_format_errors() {
    assert_eq!(tcone(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(tcone(&["rn-decompose"]).status.code(), Some(64));
    let broken = scratch("broken.json", "{ \"n\": 2, ");
    let out = tcone(&["carath", "--input", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    let wrong_shape = scratch("wrong_shape.json", "{ \"n\": 2, \"coeffs\": [[1, 0]] }");
    assert_eq!(tcone(&["carath", "--input", wrong_shape.to_str().unwrap()]).status.code(), Some(65));
}

#[test]
fn psd_and_carath_outcomes() {
    let m = scratch("m.json", r#"{ "rows": 2, "cols": 2, "entries": [[1, 0], [2, 0], [2, 0], [1, 0]] }"#);
    let out = tcone(&["psd", "--input", m.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!((report(&out)["outcome"]["min_eigenvalue"].as_f64().unwrap() + 1.0).abs() < 1e-12);

    let t = scratch("t.json", r#"{ "n": 2, "coeffs": [[0, -1], [2, 0], [0, 1]] }"#);
    let out = tcone(&["carath", "--input", t.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let total: f64 = report(&out)["outcome"]["atoms"].as_array().unwrap().iter().map(|a| a["weight"].as_f64().unwrap()).sum();
    assert!((total - 2.0).abs() < 1e-9);
}

#[test]
fn trigonometric_commands() {
    let f = scratch("f.json", r#"{ "n": 2, "coeffs": [[1, 0], [2, 0], [1, 0]] }"#);
    let out = tcone(&["fr-factor", "--input", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(tcone(&["fr-nonneg", "--input", f.to_str().unwrap()]).status.code(), Some(0));
    let g = scratch("g.json", r#"{ "n": 2, "coeffs": [[1, 0], [1, 0], [1, 0]] }"#);
    let out = tcone(&["fr-factor", "--input", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!((report(&out)["outcome"]["min_value"].as_f64().unwrap() + 1.0).abs() < 1e-9);
}

#[test]
fn combined_input_wins() {
    let combined = scratch(
        "pair.json",
        r#"{ "toeplitz": { "n": 2, "coeffs": [[1, 0], [1, 0], [1, 0]] }, "poly": { "n": 2, "coeffs": [[1, 0], [2, 0], [1, 0]] } }"#,
    );
    let other = scratch("other_t.json", r#"{ "n": 2, "coeffs": [[0, 0], [5, 0], [0, 0]] }"#);
    let poly = scratch("other_f.json", r#"{ "n": 2, "coeffs": [[0, 0], [1, 0], [0, 0]] }"#);
    let out = tcone(&[
        "pair",
        "--input",
        combined.to_str().unwrap(),
        "--toeplitz",
        other.to_str().unwrap(),
        "--poly",
        poly.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["outcome"]["value"][0].as_f64().unwrap(), 4.0);
    let split = tcone(&["pair", "--toeplitz", other.to_str().unwrap(), "--poly", poly.to_str().unwrap()]);
    assert_eq!(report(&split)["outcome"]["value"][0].as_f64().unwrap(), 5.0);
}

#[test]
fn corner_and_conv_hull() {
    assert_eq!(tcone(&["corner-test", "--zeta", "[1, 0]", "--m", "3"]).status.code(), Some(0));
    assert_eq!(tcone(&["corner-test", "--zeta", "[0, 1]", "--m", "3"]).status.code(), Some(1));
    assert_eq!(tcone(&["corner-test", "--zeta", "oops", "--m", "3"]).status.code(), Some(64));
    let xi = scratch("xi.json", "[[1, 0], [-1, 0]]");
    let out = tcone(&["conv-hull", "--input", xi.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["outcome"]["min_eigenvalue"].as_f64().unwrap() <= -0.5);
}

#[test]
fn sepstar_product_of_factors() {
    let a = scratch("sa.json", r#"{ "n": 2, "coeffs": [[0.5, 0], [1, 0], [0.5, 0]] }"#);
    let out = tcone(&["sepstar", "--first", a.to_str().unwrap(), "--second", a.to_str().unwrap(), "--grid", "32"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["tolerances"]["grid"], 32);
}

#[test]
fn output_flag_writes_file() {
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("rn2.json");
    let out = tcone(&["rn-decompose", "--n", "2", "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(r["outcome"]["atoms"].as_array().unwrap().len(), 5);
}
