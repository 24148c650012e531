mod common;

use krein_core::quad::{integrate_oscillatory, pv_double_limit, pv_point, residue_oracle, QuadConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// Rational integrand with a simple pole at `x0`.
fn rational(coef: [f64; 4], x0: f64) -> impl Fn(f64) -> Complex64 {
    move |x: f64| {
        let p = coef[0] + x * (coef[1] + x * coef[2]);
        c(p / (x - x0) + coef[3] / (1.0 + x * x))
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn pv_point_is_linear(
        cf in prop::array::uniform4(-3.0f64..3.0),
        cg in prop::array::uniform4(-3.0f64..3.0),
        alpha in -2.0f64..2.0,
        beta in -2.0f64..2.0,
        x0 in -0.5f64..0.5,
    ) {
        let tol = 1e-8;
        let cfg = QuadConfig::new(tol);
        let f = rational(cf, x0);
        let g = rational(cg, x0);
        let h = |x: f64| f(x) * alpha + g(x) * beta;
        let (a, b) = (-1.0, 2.0);
        let rf = pv_point(&f, x0, a, b, &cfg);
        let rg = pv_point(&g, x0, a, b, &cfg);
        let rh = pv_point(&h, x0, a, b, &cfg);
        prop_assert!(rf.converged && rg.converged && rh.converged);
        let gap = (rh.value - (rf.value * alpha + rg.value * beta)).norm();
        prop_assert!(gap <= 2.0 * tol, "gap {gap}");
    }

    #[test]
    fn pv_double_limit_of_odd_function_is_zero(
        a in 0.1f64..3.0,
        b in -2.0f64..2.0,
        p in 1.0f64..2.5,
    ) {
        let tol = 1e-6;
        // Odd about 0, singular there, with both decaying and slowly decaying parts.
        let f = move |l: f64| c(b / l + l / (1.0 + a * l * l).powf(p)) + Complex64::new(0.0, (l).sin() / (1.0 + l * l));
        let r = pv_double_limit(&f, Some(0.0), &QuadConfig::new(tol));
        prop_assert!(r.converged, "{r:?}");
        prop_assert!(r.value.norm() <= tol, "{r:?}");
    }
}

#[test]
fn residue_oracle_matches_pv_double_limit() {
    let cfg = QuadConfig::new(1e-7);
    for (t, z, k) in common::residue_cases(0x5eed) {
        let r = pv_double_limit(&common::residue_integrand(t, z, k), None, &cfg);
        let want = residue_oracle(t, z, k).unwrap();
        assert!(r.converged, "t={t} z={z} k={k}: {r:?}");
        let gap = (r.value - want).norm();
        assert!(gap <= 1e-5, "t={t} z={z} k={k}: got {} want {want} gap {gap}", r.value);
    }
}

#[test]
fn residue_zero_t_matches_resolvent_pv() {
    for z in [Complex64::i(), Complex64::new(0.5, -2.0)] {
        let f = move |l: f64| Complex64::new(1.0, 0.0) / (Complex64::new(l, 0.0) + z);
        let r = pv_double_limit(&f, None, &QuadConfig::new(1e-7));
        let want = residue_oracle(0.0, z, 0).unwrap();
        assert!((r.value - want).norm() <= 1e-5, "{r:?} vs {want}");
    }
}

#[test]
fn oscillatory_matches_brute_force_on_twenty_amplitudes() {
    let amps = common::amplitudes();
    assert_eq!(amps.len(), 20);
    let tol = 1e-8;
    for (i, (h, omega, kind, a)) in amps.iter().enumerate() {
        let r = integrate_oscillatory(h.as_ref(), *omega, *kind, *a, &QuadConfig::new(tol));
        assert!(r.converged, "amplitude {i}: {r:?}");
        let want = common::brute_force(h.as_ref(), *omega, *kind, *a);
        let gap = (r.value.re - want).abs();
        assert!(gap <= (1e-6f64).max(10.0 * tol), "amplitude {i}: got {} want {want} gap {gap}", r.value.re);
    }
}

/// The core `|λ| < N_0` grows with a far singularity; a narrow bump at the
/// origin must still be resolved. `(1/π) PV∫ f(s)/(x - s) ds ≈ (1/(πx))∫f`
/// for `x` far outside the support scale of `f`.
#[test]
fn pv_with_far_singularity_sees_the_origin() {
    let f = |s: f64| Complex64::new(s.cos() / (1.0 + s * s), 0.0);
    let cfg = QuadConfig::new(1e-9);
    for x in [1e5, 1e7, 1e8] {
        let r = pv_double_limit(&|s: f64| f(s) / (x - s), Some(x), &cfg);
        let want = (-1.0f64).exp() / x;
        assert!(r.converged);
        assert!((r.value.re / std::f64::consts::PI - want).abs() < 1e-9 && want > 1e-9, "x={x}: {}", r.value.re);
    }
}
