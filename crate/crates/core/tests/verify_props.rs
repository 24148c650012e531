use std::f64::consts::PI;

use krein_core::expr::Expression;
use krein_core::measure::{test_corpus, Measure};
use krein_core::quad::QuadConfig;
use krein_core::transforms::{hilbert_line, BochnerTransform};
use krein_core::verify::{
    c0_iterated_log_example, c0_log_example, c0_negative_example, carleman_identity, check_3alpha, check_6alpha,
    check_c0, check_d2, check_s2, check_s3, hilbert_identity, hilbert_involution_e1, povzner, Verdict,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn e(s: &str) -> Expression {
    Expression::parse(s).unwrap()
}

fn consistent(v: &Verdict) -> bool {
    let gap_ok = match (v.lhs, v.rhs, v.abs_gap) {
        (Some(l), Some(r), Some(g)) => (l - r).norm() == g,
        (_, _, None) => true,
        _ => false,
    };
    !(v.passed && v.inconclusive) && gap_ok
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn carleman_identity_on_random_half_plane_points(
        idx in 0usize..7,
        re in -3.0f64..3.0,
        im in 0.5f64..3.0,
        upper in any::<bool>(),
    ) {
        let (name, mu) = test_corpus().swap_remove(idx);
        let z = Complex64::new(re, if upper { im } else { -im });
        let v = carleman_identity(&mu, z, &QuadConfig::new(1e-4));
        prop_assert!(consistent(&v));
        prop_assert!(v.passed, "{name} at {z}: {:?}", v.abs_gap);
    }
}

#[test]
fn carleman_identity_on_corpus() {
    let cfg = QuadConfig::new(1e-4);
    let zs = [Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0), Complex64::new(1.0, 2.0), Complex64::new(-3.0, -0.5)];
    for (name, mu) in test_corpus() {
        for z in zs {
            let v = carleman_identity(&mu, z, &cfg);
            assert!(consistent(&v));
            assert!(v.passed, "{name} at {z}: gap {:?} notes {:?}", v.abs_gap, v.notes);
        }
    }
}

#[test]
fn hilbert_identity_on_corpus() {
    let cfg = QuadConfig::new(1e-4);
    for (name, mu) in test_corpus() {
        for x in [-2.0, 0.0, 0.7, 5.0] {
            let v = hilbert_identity(&mu, x, &cfg);
            assert!(consistent(&v));
            assert!(v.passed, "{name} at {x}: gap {:?} notes {:?}", v.abs_gap, v.notes);
        }
    }
}

#[test]
fn povzner_on_corpus_densities() {
    let cfg = QuadConfig::new(1e-3);
    let zs = [Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0), Complex64::new(0.0, -1.0)];
    for (name, mu) in test_corpus().into_iter().filter(|(_, m)| m.atoms().is_empty()) {
        for k in 0..=2 {
            for z in zs {
                let v = povzner(&mu, k, z, &cfg);
                assert!(consistent(&v));
                assert!(v.passed, "{name} k={k} z={z}: gap {:?} notes {:?}", v.abs_gap, v.notes);
            }
        }
    }
}

#[test]
fn povzner_order_zero_matches_carleman_identity() {
    let cfg = QuadConfig::new(1e-5);
    let mu = Measure::density(f64::NEG_INFINITY, f64::INFINITY, "exp(-abs(t))").unwrap();
    let z = Complex64::new(0.0, 1.0);
    let a = povzner(&mu, 0, z, &cfg);
    let b = carleman_identity(&mu, z, &cfg);
    assert!((a.lhs.unwrap() - b.lhs.unwrap()).norm() <= 1e-6);
    assert!((a.rhs.unwrap() - 0.5).norm() < 1e-9);
}

#[test]
fn eigenrelation_for_measures_on_the_right_half_line() {
    let cfg = QuadConfig::new(1e-6);
    for (name, mu) in test_corpus().into_iter().filter(|(_, m)| m.supported_in(0.0, f64::INFINITY) && !m.atoms().iter().any(|a| a.t == 0.0)) {
        let ft = BochnerTransform::new(&mu, 0, &QuadConfig::new(1e-10)).unwrap();
        let phi = |l: f64| ft.eval(l).unwrap();
        let mut worst: f64 = 0.0;
        for j in 0..10 {
            let x = -4.5 + j as f64;
            let h = hilbert_line(&phi, x, &cfg).unwrap();
            worst = worst.max((h - Complex64::i() * phi(x)).norm());
        }
        assert!(worst <= 1e-4, "{name}: {worst}");
    }
}

#[test]
fn verdicts_are_deterministic() {
    let cfg = QuadConfig::new(1e-5);
    let mu = Measure::density(0.0, f64::INFINITY, "exp(-t)").unwrap();
    let z = Complex64::new(0.5, 1.5);
    assert_eq!(carleman_identity(&mu, z, &cfg).to_json(), carleman_identity(&mu, z, &cfg).to_json());
    let (r, p) = c0_log_example();
    assert_eq!(check_c0(&r, &p, &cfg).to_json(), check_c0(&r, &p, &cfg).to_json());
}

#[test]
fn c0_reproduces_positive_and_negative_examples() {
    let cfg = QuadConfig::new(1e-6);
    for (r, p) in [c0_log_example(), c0_iterated_log_example()] {
        let v = check_c0(&r, &p, &cfg);
        assert!(v.passed, "{r}: {:?}", v.notes);
        assert_eq!(v.traces.len(), p.breakpoints.len() + 1);
    }
    let (r, p) = c0_negative_example();
    let v = check_c0(&r, &p, &cfg);
    assert!(!v.passed && !v.inconclusive, "{:?}", v.notes);
    // The divergent integral is the one at the breakpoint 0.
    let diverged: Vec<_> = v.evidence.iter().filter(|e| e.value.is_infinite()).map(|e| e.label.clone()).collect();
    assert_eq!(diverged, vec!["∫_0^1 |R(0 + x) - R(0 - x)|/x dx".to_string()]);
}

#[test]
fn positivity_examples() {
    let cfg = QuadConfig::new(1e-6);
    let v = check_s2(&e("1/(1+x)"), &cfg);
    assert!(v.passed, "{:?}", v.notes);
    // ∫ F_c = √(π/2) f(0) independently of the checker's own arithmetic.
    assert!((v.rhs.unwrap().re - (PI / 2.0).sqrt()).abs() < 1e-12);
    assert!(check_s3(&e("exp(-x)"), 2, &cfg).passed);
    assert!(check_s3(&e("x*exp(x)"), 1, &cfg).inconclusive);
    let v = check_3alpha(&e("1/(1+x)^2"), &cfg);
    assert!(v.passed, "{:?}", v.notes);
}

#[test]
fn sufficient_conditions_examples() {
    let cfg = QuadConfig::new(1e-6);
    assert!(check_d2(&e("x*exp(-abs(x))"), 0.0, &cfg).passed);
    assert!(check_6alpha(&e("exp(-abs(x-1))"), 2.0, &cfg).passed);
    // Every convergence test leaves its window sequence for audit.
    let v = check_6alpha(&e("exp(-abs(x-1))"), 2.0, &cfg);
    assert!(v.traces.iter().all(|t| !t.partials.is_empty()));
}

#[test]
fn e1_constant_for_decaying_oscillation() {
    let cfg = QuadConfig::new(1e-6);
    let v = hilbert_involution_e1(&e("cos(t)/(1+t^2)"), &[-2.0, 0.0, 1.0, 3.0], &cfg);
    assert!(v.passed, "{:?} {:?}", v.evidence, v.notes);
}
