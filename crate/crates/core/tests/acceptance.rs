//! Acceptance suite: one `PASS`/`FAIL` line per criterion.
//!
//! Run with `cargo test -p krein-core --test acceptance -- --nocapture`.
//! Every criterion builds a JSON report from its computed values (never from
//! timings); criterion 10 reruns the criteria and compares reports bytewise.
//!
//! A criterion listed in [`KNOWN_UNATTAINABLE`] prints `FAIL`; the test then
//! asserts that it fails for exactly the documented reason, so a regression
//! elsewhere in that criterion still breaks `cargo test`.

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use krein_core::circle::{hilbert_circle, pv_circle_formula, pv_circle_quadrature, wiener_norm, CoeffSeq};
use krein_core::expr::Expression;
use krein_core::measure::{test_corpus, Measure};
use krein_core::quad::{integrate_improper, integrate_oscillatory, pv_double_limit, residue_oracle, QuadConfig};
use krein_core::transforms::{hilbert_line, BochnerTransform};
use krein_core::verify::{
    c0_iterated_log_example, c0_log_example, c0_negative_example, carleman_identity, check_c0, check_s1, check_s2,
    hilbert_identity, hilbert_involution_e1, povzner, Verdict,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Criteria that cannot pass with a correct implementation, and why.
const KNOWN_UNATTAINABLE: &[(u8, &str)] = &[(
    8,
    "for f = 1/(1+t^2) the generalized transform gives h^2 f + f = 1/2, not 0: \
     h f = Hf + (1/pi) int t f(t)/(1+t^2) dt adds a constant, and applying h to Hf = x/(1+x^2) \
     adds (1/pi) int t^2/(1+t^2)^2 dt = 1/2",
)];

struct Outcome {
    passed: bool,
    detail: String,
    report: Value,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn e(s: &str) -> Expression {
    Expression::parse(s).unwrap()
}

fn verdict_json(v: &Verdict) -> Value {
    serde_json::from_str(&v.to_json()).expect("verdict JSON parses")
}

fn gap_of(v: &Verdict) -> f64 {
    v.abs_gap.unwrap_or(f64::INFINITY)
}

/// Carleman representation on the corpus, plus the forced value at `δ₀`.
fn criterion_1() -> Outcome {
    let cfg = QuadConfig::new(1e-4);
    let zs = [c(0.0, 1.0), c(0.0, -1.0), c(1.0, 2.0), c(-3.0, -0.5)];
    let mut worst: f64 = 0.0;
    let mut all = true;
    let mut cases = Vec::new();
    for (name, mu) in test_corpus() {
        for z in zs {
            let v = carleman_identity(&mu, z, &cfg);
            worst = worst.max(gap_of(&v));
            all &= v.passed && gap_of(&v) <= 1e-4;
            cases.push(json!({"measure": name, "z": [z.re, z.im], "verdict": verdict_json(&v)}));
        }
    }
    let dirac = Measure::dirac(0.0, c(1.0, 0.0));
    let v = carleman_identity(&dirac, c(0.0, 1.0), &QuadConfig::new(1e-7));
    let forced = v.lhs.map_or(f64::INFINITY, |l| (l - 0.5).norm());
    Outcome {
        passed: all && forced <= 1e-6,
        detail: format!("{} cases, max gap {worst:.2e} <= 1e-4; delta_0 at z=i: |lhs - 1/2| = {forced:.2e} <= 1e-6", cases.len()),
        report: json!({"cases": cases, "dirac_at_i": verdict_json(&v)}),
    }
}

/// Povzner formula for two densities, `k ≤ 2`, three points.
fn criterion_2() -> Outcome {
    let inf = f64::INFINITY;
    let densities = [
        ("exp(-|t|)", Measure::density(-inf, inf, "exp(-abs(t))").unwrap()),
        ("exp(-t^2)", Measure::density(-inf, inf, "exp(-t^2)").unwrap()),
    ];
    let zs = [c(0.0, 1.0), c(0.0, 2.0), c(0.0, -1.0)];
    let cfg = QuadConfig::new(1e-3);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut all = true;
    let mut cases = Vec::new();
    for (name, mu) in &densities {
        for k in 0..=2 {
            for z in zs {
                let v = povzner(mu, k, z, &cfg);
                worst = worst.max(gap_of(&v));
                all &= v.passed && gap_of(&v) <= 1e-3;
                cases.push(json!({"density": name, "k": k, "z": [z.re, z.im], "verdict": verdict_json(&v)}));
            }
        }
    }
    let seconds = start.elapsed().as_secs_f64();
    // Order zero against the Carleman pipeline at that criterion's tolerance.
    let c1 = QuadConfig::new(1e-4);
    let mut order_zero: f64 = 0.0;
    for (_, mu) in &densities {
        for z in zs {
            let a = povzner(mu, 0, z, &c1).lhs;
            let b = carleman_identity(mu, z, &c1).lhs;
            order_zero = order_zero.max(match (a, b) {
                (Some(a), Some(b)) => (a - b).norm(),
                _ => f64::INFINITY,
            });
        }
    }
    Outcome {
        passed: all && order_zero <= 1e-6 && seconds <= 300.0,
        detail: format!(
            "{} cases, max gap {worst:.2e} <= 1e-3; k=0 vs Carleman pipeline {order_zero:.2e} <= 1e-6; {seconds:.1} s <= 300 s",
            cases.len()
        ),
        report: json!({"cases": cases, "order_zero_gap": order_zero}),
    }
}

/// Hilbert transform of a Fourier transform, and the constant case.
fn criterion_3() -> Outcome {
    let cfg = QuadConfig::new(1e-4);
    let mut worst: f64 = 0.0;
    let mut all = true;
    let mut cases = Vec::new();
    for (name, mu) in test_corpus() {
        for x in [-2.0, 0.0, 0.7, 5.0] {
            let v = hilbert_identity(&mu, x, &cfg);
            worst = worst.max(gap_of(&v));
            all &= v.passed && gap_of(&v) <= 1e-4;
            cases.push(json!({"measure": name, "x": x, "verdict": verdict_json(&v)}));
        }
    }
    // μ̂ of δ₀ is constant, so its Hilbert transform vanishes.
    let dirac = Measure::dirac(0.0, c(1.0, 0.0));
    let tight = QuadConfig::new(1e-8);
    let mut constant: f64 = 0.0;
    let mut dirac_cases = Vec::new();
    for x in [-2.0, 0.0, 0.7, 5.0] {
        let v = hilbert_identity(&dirac, x, &tight);
        constant = constant.max(v.lhs.map_or(f64::INFINITY, |l| l.norm()));
        dirac_cases.push(verdict_json(&v));
    }
    Outcome {
        passed: all && constant <= 1e-8,
        detail: format!("{} cases, max gap {worst:.2e} <= 1e-4; delta_0 max |lhs| = {constant:.2e} <= 1e-8", cases.len()),
        report: json!({"cases": cases, "dirac": dirac_cases}),
    }
}

/// `H μ̂ = i μ̂` for measures on `[0, ∞)` and `-i μ̂` for `(-∞, 0]`.
fn criterion_4() -> Outcome {
    let cfg = QuadConfig::new(1e-6);
    let table_cfg = QuadConfig::new(1e-10);
    let mut all = true;
    let mut lines = Vec::new();
    let mut cases = Vec::new();
    for (name, mu) in test_corpus() {
        let at_zero = mu.atoms().iter().any(|a| a.t == 0.0);
        let factor = if mu.supported_in(0.0, f64::INFINITY) && !at_zero {
            Complex64::i()
        } else if mu.supported_in(f64::NEG_INFINITY, 0.0) && !at_zero {
            -Complex64::i()
        } else {
            continue;
        };
        let ft = BochnerTransform::new(&mu, 0, &table_cfg).unwrap();
        let phi = |l: f64| ft.eval(l).unwrap();
        let mut worst: f64 = 0.0;
        for j in 0..10 {
            let x = -4.5 + j as f64;
            worst = worst.max(match hilbert_line(&phi, x, &cfg) {
                Ok(h) => (h - factor * phi(x)).norm(),
                Err(_) => f64::INFINITY,
            });
        }
        all &= worst <= 1e-4;
        lines.push(format!("{name} ({}i) {worst:.1e}", if factor.im > 0.0 { "+" } else { "-" }));
        cases.push(json!({"measure": name, "eigenvalue": [factor.re, factor.im], "max_error": worst}));
    }
    Outcome {
        passed: all && cases.len() == 4,
        detail: format!("max error over 10 points <= 1e-4: {}", lines.join(", ")),
        report: json!({"cases": cases}),
    }
}

/// PV formula against quadrature on monomials; isometry and `H² = -I`.
fn criterion_5() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut gaps = Vec::new();
    for n in -16i64..=16 {
        let w = CoeffSeq::monomial(n, c(1.0, 0.0));
        for j in 0..12 {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 12.0 + 0.05);
            let formula = pv_circle_formula(&w, z).unwrap();
            let gap = match pv_circle_quadrature(&w, z, 1e-8) {
                Ok(r) if r.converged => (r.value - formula).norm(),
                _ => f64::INFINITY,
            };
            worst = worst.max(gap);
            gaps.push(gap);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xc1);
    let mut norm_err: f64 = 0.0;
    let mut involution_err: f64 = 0.0;
    for _ in 0..100 {
        let mut w = CoeffSeq::new();
        for n in -16i64..=16 {
            if n != 0 && rng.gen_bool(0.6) {
                w.set(n, c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
            }
        }
        let h = hilbert_circle(&w);
        norm_err = norm_err.max((wiener_norm(&h) - wiener_norm(&w)).abs());
        let hh = hilbert_circle(&h);
        involution_err = involution_err.max((-16i64..=16).map(|n| (hh.get(n) + w.get(n)).norm()).fold(0.0, f64::max));
    }
    Outcome {
        passed: worst <= 1e-6 && norm_err == 0.0 && involution_err == 0.0,
        detail: format!(
            "{} monomial cases, max gap {worst:.2e} <= 1e-6; 100 polynomials: norm error {norm_err:e}, H^2+I error {involution_err:e}",
            gaps.len()
        ),
        report: json!({"monomial_gaps": gaps, "norm_error": norm_err, "involution_error": involution_err}),
    }
}

/// Exact integrals of the cosine transform and the sine tail, and signs.
fn criterion_6() -> Outcome {
    let cfg = QuadConfig::new(1e-10);
    let s2 = check_s2(&e("exp(-x)"), &cfg);
    let s1 = check_s1(&e("exp(-x)"), 0, &cfg);
    // Closed forms: F_c(t) = √(2/π)/(1+t²), g_0(t) = t/(1+t²).
    let fc_gap = s2.lhs.map_or(f64::INFINITY, |l| (l - (0.5 * PI).sqrt()).norm());
    let g_gap = s1.lhs.map_or(f64::INFINITY, |l| (l - 0.5 * PI).norm());
    let min_of = |v: &Verdict| v.evidence.iter().find(|ev| ev.label.starts_with("min")).map_or(f64::NEG_INFINITY, |ev| ev.value);
    let (min_fc, min_g) = (min_of(&s2), min_of(&s1));
    Outcome {
        passed: s2.passed && s1.passed && fc_gap <= 1e-6 && g_gap <= 1e-5 && min_fc >= -1e-10 && min_g >= -1e-10,
        detail: format!(
            "|int F_c - sqrt(pi/2)| = {fc_gap:.2e} <= 1e-6; |int g/t - pi/2| = {g_gap:.2e} <= 1e-5; min F_c {min_fc:.2e}, min g {min_g:.2e} >= -1e-10"
        ),
        report: json!({"s2": verdict_json(&s2), "s1": verdict_json(&s1)}),
    }
}

/// The membership criterion on two positive examples and one negative one.
fn criterion_7() -> Outcome {
    let cfg = QuadConfig::new(1e-6);
    let mut all = true;
    let mut lines = Vec::new();
    let mut cases = Vec::new();
    for (label, (r, p), want) in [
        ("log example", c0_log_example(), true),
        ("iterated log example", c0_iterated_log_example(), true),
        ("negative example", c0_negative_example(), false),
    ] {
        let start = Instant::now();
        let v = check_c0(&r, &p, &cfg);
        let seconds = start.elapsed().as_secs_f64();
        let ok = v.passed == want && !v.inconclusive && seconds <= 120.0;
        all &= ok;
        let word = if v.passed { "passed" } else if v.inconclusive { "inconclusive" } else { "failed" };
        lines.push(format!("{label} {word} in {seconds:.1} s"));
        cases.push(json!({"example": label, "verdict": verdict_json(&v)}));
    }
    Outcome { passed: all, detail: lines.join("; "), report: json!({"cases": cases}) }
}

const E1_POINTS: [f64; 4] = [-2.0, -0.5, 1.0, 3.0];

/// `h²f + f` constant on the Lorentzian, with the constant required to be 0.
fn criterion_8() -> Outcome {
    let v = hilbert_involution_e1(&e("1/(1+t^2)"), &E1_POINTS, &QuadConfig::new(1e-6));
    let spread = v.evidence.iter().find(|ev| ev.label.contains("spread")).map_or(f64::INFINITY, |ev| ev.value);
    let constant = v.lhs.map_or(f64::NAN, |l| l.re);
    Outcome {
        passed: v.passed && spread <= 1e-3 && constant.abs() <= 1e-3,
        detail: format!("spread {spread:.2e} <= 1e-3; C = {constant:.6} (required |C| <= 1e-3)"),
        report: verdict_json(&v),
    }
}

/// Evidence that criterion 8 fails only on the value of the constant.
fn criterion_8_diagnosis(out: &Outcome) -> Result<(), String> {
    let v = &out.report;
    if v["passed"] != Value::Bool(true) {
        return Err("E1 no longer finds h^2 f + f constant".into());
    }
    let constant = v["lhs"][0].as_f64().ok_or("no constant")?;
    // Independent route: C = (1/π) ∫ t²/(1+t²)² dt by plain quadrature.
    let w = |t: f64| c(t * t / (1.0 + t * t).powi(2) / PI, 0.0);
    let oracle = integrate_improper(&w, f64::NEG_INFINITY, f64::INFINITY, &QuadConfig::new(1e-10)).value.re;
    if (oracle - 0.5).abs() > 1e-9 || (constant - oracle).abs() > 1e-3 {
        return Err(format!("C = {constant}, oracle {oracle}"));
    }
    Ok(())
}

/// Residue closed form against the PV double limit, and the oscillatory
/// integrator against brute force.
fn criterion_9() -> Outcome {
    let cfg = QuadConfig::new(1e-7);
    let mut residue_worst: f64 = 0.0;
    let mut residue_gaps = Vec::new();
    for (t, z, k) in common::residue_cases(0x5eed) {
        let r = pv_double_limit(&common::residue_integrand(t, z, k), None, &cfg);
        let gap = match residue_oracle(t, z, k) {
            Ok(want) if r.converged => (r.value - want).norm(),
            _ => f64::INFINITY,
        };
        residue_worst = residue_worst.max(gap);
        residue_gaps.push(gap);
    }
    let osc_cfg = QuadConfig::new(1e-9);
    let mut osc_worst: f64 = 0.0;
    let mut osc_gaps = Vec::new();
    for (h, omega, kind, a) in common::amplitudes() {
        let r = integrate_oscillatory(h.as_ref(), omega, kind, a, &osc_cfg);
        let gap = if r.converged { (r.value.re - common::brute_force(h.as_ref(), omega, kind, a)).abs() } else { f64::INFINITY };
        osc_worst = osc_worst.max(gap);
        osc_gaps.push(gap);
    }
    Outcome {
        passed: residue_gaps.len() == 10 && residue_worst <= 1e-5 && osc_gaps.len() == 20 && osc_worst <= 1e-6,
        detail: format!("residue: 10 cases, max gap {residue_worst:.2e} <= 1e-5; oscillatory: 20 amplitudes, max gap {osc_worst:.2e} <= 1e-6"),
        report: json!({"residue_gaps": residue_gaps, "oscillatory_gaps": osc_gaps}),
    }
}

type Criterion = fn() -> Outcome;

const CRITERIA: [(u8, &str, Criterion, f64); 9] = [
    (1, "Carleman representation", criterion_1, 60.0),
    (2, "Povzner formula", criterion_2, 300.0),
    (3, "Hilbert identity", criterion_3, 60.0),
    (4, "eigenrelations", criterion_4, 60.0),
    (5, "circle identities", criterion_5, 60.0),
    (6, "positivity and exact integrals", criterion_6, 60.0),
    (7, "membership criterion", criterion_7, 360.0),
    (8, "involution", criterion_8, 60.0),
    (9, "quadrature core", criterion_9, 60.0),
];

fn render(report: &Value) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}

#[test]
fn acceptance() {
    let mut unexpected = Vec::new();
    let mut reports = Vec::new();
    for (id, title, run, budget) in CRITERIA {
        let start = Instant::now();
        let mut out = run();
        let seconds = start.elapsed().as_secs_f64();
        if seconds > budget {
            out.passed = false;
            out.detail += &format!("; took {seconds:.1} s > {budget} s");
        }
        let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id);
        println!("{} {id:>2} {title}: {} [{seconds:.1} s]", if out.passed { "PASS" } else { "FAIL" }, out.detail);
        match known {
            Some((_, why)) => {
                println!("        known unattainable: {why}");
                if out.passed {
                    unexpected.push(format!("criterion {id} passed but is listed as unattainable"));
                } else if id == 8 {
                    if let Err(e) = criterion_8_diagnosis(&out) {
                        unexpected.push(format!("criterion 8 fails for an undocumented reason: {e}"));
                    }
                }
            }
            None if !out.passed => unexpected.push(format!("criterion {id} failed: {}", out.detail)),
            None => {}
        }
        reports.push((id, render(&out.report)));
    }

    // Criterion 10: the same runs again, byte for byte.
    let start = Instant::now();
    let mut differing = Vec::new();
    for ((id, _, run, _), (_, first)) in CRITERIA.iter().zip(&reports) {
        if render(&run().report) != *first {
            differing.push(*id);
        }
    }
    let bytes: usize = reports.iter().map(|(_, r)| r.len()).sum();
    let ok = differing.is_empty();
    println!(
        "{} 10 determinism: reran criteria 1-9, {bytes} report bytes, differing: {differing:?} [{:.1} s]",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
    if !ok {
        unexpected.push(format!("reports differ on rerun: {differing:?}"));
    }
    assert!(unexpected.is_empty(), "{unexpected:#?}");
}
