use std::process::{Command, Output};

use serde_json::Value;

fn disc_val(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_disc-val")).args(args).output().expect("spawn")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn disc_reports_valuation() {
    let out = disc_val(&["--quiet", "disc", "--ring", "Zp:5", "--vars", "3", "x0^2 + x1^2 + 5*x2^2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["valuation"], 1);
    // Det/2 of diag(2, 2, 10)
    assert_eq!(v["value"].as_str().unwrap().trim_start_matches('-'), "20");
}

#[test]
fn singular_discriminant_has_infinite_valuation() {
    let out = disc_val(&["--quiet", "disc", "--ring", "Zp:3", "--vars", "3", "x0*x1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["valuation"], "inf");
}

#[test]
fn malformed_input_is_a_usage_error() {
    let out = disc_val(&["disc", "--ring", "Zp:5", "--vars", "3", "x0^2 + x1^+"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse"));

    let out = disc_val(&["disc", "--ring", "Zp:4", "--vars", "2", "x0*x1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = disc_val(&["disc", "--ring", "Zp:5", "--vars", "2", "x0*x5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn singular_locus_of_nodal_cubic() {
    let out = disc_val(&["--quiet", "singular", "--field", "Fq:7", "--vars", "3", "x0*x1*x2 + x0^3 + x1^3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dimension"], 0);
    assert_eq!(v["r"], 1);
}

#[test]
fn classify_nodal_cubic_over_dvr() {
    let out = disc_val(&["--quiet", "classify", "--ring", "Zp:5", "--vars", "3", "x0*x1*x2 + x0^3 + x1^3 + 5*x2^3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["valuation"], 1);
    assert_eq!(v["regular"], true);
    assert_eq!(v["nondeg_single_point"], true);
}

#[test]
fn verify_exit_code_and_determinism() {
    let args = ["--quiet", "verify", "--suite", "prop3_1", "--trials", "100", "--seed", "7"];
    let a = disc_val(&args);
    assert_eq!(a.status.code(), Some(0));
    let v = json(&a);
    assert_eq!(v["passed"], true);
    assert_eq!(v["instances_run"], 100);
    let b = disc_val(&args);
    assert_eq!(a.stdout, b.stdout);

    let other = disc_val(&["--quiet", "verify", "--suite", "lemma9_1", "--trials", "30", "--seed", "7"]);
    assert_eq!(other.status.code(), Some(0));
    assert_eq!(other.stdout, disc_val(&["--quiet", "verify", "--suite", "lemma9_1", "--trials", "30", "--seed", "7"]).stdout);
}

#[test]
fn verify_rejects_bad_configuration() {
    assert_eq!(disc_val(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(disc_val(&["verify", "--suite", "prop3_1", "--ring", "Fq:5"]).status.code(), Some(2));
}

#[test]
fn make_weierstrass_matches_classical_discriminant() {
    let out = disc_val(&["--quiet", "make", "weierstrass", "--ring", "Zp:5", "--a", "0,0,0,1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out)["verification"].clone();
    assert_eq!(v["valuation"], v["classical_valuation"]);
}

#[test]
fn make_quadric_forms() {
    let out = disc_val(&["--quiet", "make", "quadric", "--ring", "Zp:2", "--vars", "4", "--kind", "split"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verification"]["valuation"], 0);
    // 2 is not a unit in Z_2
    let out = disc_val(&["make", "quadric", "--ring", "Zp:2", "--vars", "3", "--kind", "diagonal"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn make_lemma93_is_singular_at_the_points() {
    let out = disc_val(&[
        "--quiet", "make", "lemma93", "--field", "Fq:31", "--vars", "3", "--degree", "5", "--points", "1,0,0;0,1,0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let locus = &v["verification"]["singular_locus"];
    assert_eq!(locus["r"], 2);
}

#[test]
fn make_line_family() {
    let out = disc_val(&["--quiet", "make", "line-family", "--field", "Fq:7", "--vars", "3", "--degree", "3", "--c", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["poly"].as_str().unwrap().contains("x2"));
}

#[test]
fn vmin_of_quadric() {
    let out = disc_val(&["--quiet", "vmin", "--field", "Fq:5", "--vars", "3", "--exact-quadric", "x0^2 + x1^2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["vmin"], 1);
}
