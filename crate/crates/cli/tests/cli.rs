use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn krein(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krein")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn fourier_of_unit_atom_is_flat() {
    let o = krein(&["transform", "fourier", "--measure", &data("dirac0.json"), "--points", "0,1,2"]);
    assert_eq!(code(&o), 0);
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 3);
    for r in rows {
        assert!((f(&r["re"]) - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
    }
}

#[test]
fn carleman_of_exponential_decay() {
    let o = krein(&["transform", "carleman", "--measure", &data("expdecay.json"), "--z", "0+1i"]);
    assert_eq!(code(&o), 0);
    let row = &json(&o)["rows"][0];
    assert!((f(&row["re"]) - 0.5).abs() < 1e-6 && f(&row["im"]).abs() < 1e-12);
}

#[test]
fn input_errors_exit_one() {
    let o = krein(&["transform", "fourier", "--measure", &data("bad.json"), "--points", "0"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let o = krein(&["verify", "s2", "--expr", "1/("]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains('3'), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(code(&krein(&["transform", "fourier", "--points", "0"])), 1);
    assert_eq!(code(&krein(&["transform", "nope"])), 1);
    assert_eq!(code(&krein(&["verify", "s2", "--expr", "x", "--tol", "0"])), 1);
    assert_eq!(code(&krein(&["circle", "pv", "--coeffs", &data("c0only.json"), "--z", "2+0i"])), 1);
    assert_eq!(code(&krein(&["--help"])), 0);
}

#[test]
fn non_convergence_exits_two() {
    // ∫_0^∞ sin(xt) dx has no limit.
    let o = krein(&["transform", "sine", "--expr", "1", "--points", "1"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["rows"][0]["converged"], Value::Bool(false));
}

#[test]
fn verify_exit_codes_follow_the_verdict() {
    let o = krein(&["verify", "povzner", "--measure", &data("explap.json"), "--k", "1", "--z", "0+1i"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"]["passed"], Value::Bool(true));
    let o = krein(&["verify", "c0", "--expr", "1/sqrt(1+log(abs(x))^2)", "--breakpoints", "auto:paper-example"]);
    assert_eq!(code(&o), 0);
    let o = krein(&["verify", "s2", "--expr", "sin(x)"]);
    assert_eq!(code(&o), 4);
    assert_eq!(json(&o)["verdict"]["inconclusive"], Value::Bool(true));
    // An odd term whose difference quotient at 0 decays like 1/log: fails.
    let s1 = "0.804500111107696";
    let bp = format!("-{s1},0,{s1}");
    let o = krein(&[
        "verify",
        "c0",
        "--expr",
        "sign(x)*exp(-abs(x))/log(exp(1)+1/abs(x))",
        "--breakpoints",
        &bp,
        "--signs",
        "-1,1,-1,1",
    ]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&krein(&["verify", "c0", "--expr", "exp(-x^2)", "--breakpoints", "0"])), 1);
}

#[test]
fn convergence_only_mode() {
    let o = krein(&["verify", "carleman", "--measure", &data("dirac0.json"), "--z", "-3-0.5i", "--convergence-only"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"]["check"], "carleman-convergence");
    assert!(v["verdict"]["rhs"].is_null());
}

#[test]
fn circle_values() {
    let o = krein(&["circle", "pv", "--coeffs", &data("c0only.json"), "--z", "1+0i"]);
    assert_eq!(code(&o), 0);
    let v = json(&o)["value"].clone();
    assert_eq!((f(&v[0]), f(&v[1])), (0.0, 1.0));
    let o = krein(&["circle", "cauchy", "--coeffs", &data("c0only.json"), "--z", "0+0i"]);
    assert_eq!(code(&o), 0);
    let v = json(&o)["value"].clone();
    assert_eq!((f(&v[0]), f(&v[1])), (0.0, 2.0 * PI));
    let o = krein(&["circle", "hilbert", "--coeffs", &data("c.json")]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(f(&v["input_norm"]), f(&v["output_norm"]));
    // (Hw)_1 = -i c_1 with c_1 = 1.
    let first = &v["coeffs"]["coeffs"][1];
    assert_eq!((first["n"].as_i64(), f(&first["re"]), f(&first["im"])), (Some(1), 0.0, -1.0));
    assert_eq!(code(&krein(&["circle", "isometry", "--coeffs", &data("c.json")])), 0);
    assert_eq!(code(&krein(&["circle", "isometry", "--coeffs", &data("c0only.json")])), 4);
}

#[test]
fn reports_are_byte_identical_and_carry_the_config() {
    let args = ["verify", "e1", "--expr", "1/(1+t^2)", "--seed", "3", "--tol", "1e-5", "--budget", "500000"];
    let a = krein(&args);
    let b = krein(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(f(&v["config"]["tolerance"]), 1e-5);
    assert_eq!(v["config"]["budget"], 500000);
    assert_eq!(v["config"]["seed"], 3);
    assert_eq!(f(&v["config"]["schedule"]["decay_ratio"]), 0.75);
    // Seeded sample points: four evidence rows plus the spread.
    assert_eq!(v["verdict"]["evidence"].as_array().unwrap().len(), 6);
    let text = String::from_utf8_lossy(&a.stdout);
    assert!(text.contains("\"tolerance\": 1.0000000000000001e-5"), "{text}");
}

#[test]
fn csv_output_and_out_file() {
    let path = std::env::temp_dir().join(format!("krein-cli-test-{}.csv", std::process::id()));
    let o = krein(&[
        "transform",
        "cosine",
        "--expr",
        "exp(-x)",
        "--points",
        "1,2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# command=transform cosine"));
    assert!(lines.iter().any(|l| l.starts_with("# budget=1000000")));
    let body: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "x,re,im,err");
    // F_c(t) = √(2/π)/(1 + t²) for e^{-x}.
    let re: f64 = body[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((re - (2.0 / PI).sqrt() / 2.0).abs() < 1e-10);
    assert_eq!(body.len(), 3);
}
