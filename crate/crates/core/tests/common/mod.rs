//! Oracles shared by the integration tests.
#![allow(dead_code)]

use krein_core::quad::{integrate_adaptive, OscKind, QuadConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Amp = Box<dyn Fn(f64) -> f64>;

/// Dense unit panels on [a, T] plus a two-term integration-by-parts tail.
pub fn brute_force(h: &dyn Fn(f64) -> f64, omega: f64, kind: OscKind, a: f64) -> f64 {
    let t_end = 1e4;
    let cfg = QuadConfig::new(1e-12);
    let f = |x: f64| {
        let s = match kind {
            OscKind::Sin => (omega * x).sin(),
            OscKind::Cos => (omega * x).cos(),
        };
        Complex64::new(h(x) * s, 0.0)
    };
    let mut sum = 0.0;
    let mut x = a;
    while x < t_end {
        let nx = (x + 1.0).min(t_end);
        sum += integrate_adaptive(&f, x, nx, &cfg).value.re;
        x = nx;
    }
    let d = 1e-3;
    let hp = (h(t_end + d) - h(t_end - d)) / (2.0 * d);
    let (s, co) = ((omega * t_end).sin(), (omega * t_end).cos());
    let tail = match kind {
        OscKind::Sin => h(t_end) * co / omega - hp * s / (omega * omega),
        OscKind::Cos => -h(t_end) * s / omega - hp * co / (omega * omega),
    };
    sum + tail
}

/// Twenty slowly decaying amplitudes with frequency, kind and lower limit.
pub fn amplitudes() -> Vec<(Amp, f64, OscKind, f64)> {
    vec![
        (Box::new(|x: f64| 1.0 / (1.0 + x)), 10.0, OscKind::Sin, 0.0),
        (Box::new(|x: f64| 1.0 / (1.0 + x)), 10.0, OscKind::Cos, 0.0),
        (Box::new(|x: f64| 1.0 / (1.0 + x)), 1.0, OscKind::Sin, 0.0),
        (Box::new(|x: f64| 1.0 / (1.0 + x)), 3.0, OscKind::Cos, 0.5),
        (Box::new(|x: f64| (-x).exp()), 1.0, OscKind::Sin, 0.0),
        (Box::new(|x: f64| (-x).exp()), 0.25, OscKind::Cos, 0.0),
        (Box::new(|x: f64| (-0.1 * x).exp()), 2.0, OscKind::Sin, 0.0),
        (Box::new(|x: f64| 1.0 / (1.0 + x * x)), 1.0, OscKind::Cos, 0.0),
        (Box::new(|x: f64| 1.0 / (1.0 + x * x)), 5.0, OscKind::Sin, 0.0),
        (Box::new(|x: f64| 1.0 / (2.0 + x).powf(1.5)), 1.5, OscKind::Sin, 0.0),
        (Box::new(|x: f64| 1.0 / (2.0 + x).powf(0.5)), 4.0, OscKind::Cos, 0.0),
        (Box::new(|x: f64| 1.0 / (3.0 + x).ln()), 2.0, OscKind::Sin, 0.0),
        (Box::new(|x: f64| x * (-x).exp()), 1.0, OscKind::Sin, 0.0),
        (Box::new(|x: f64| (-x * x).exp()), 1.0, OscKind::Cos, 0.0),
        (Box::new(|x: f64| 1.0 / (1.0 + x).powi(2)), 0.5, OscKind::Cos, 0.0),
        (Box::new(|x: f64| (1.0 + x).sqrt() / (1.0 + x * x)), 2.0, OscKind::Sin, 0.3),
        (Box::new(|x: f64| 1.0 / (1.0 + 0.1 * x)), 6.0, OscKind::Sin, 0.0),
        (Box::new(|x: f64| (1.0 + x).atan() / (1.0 + x)), 3.0, OscKind::Cos, 0.0),
        (Box::new(|x: f64| 1.0 / (1.0 + x) + (-x).exp()), 2.5, OscKind::Sin, 1.0),
        (Box::new(|x: f64| 1.0 / ((1.0 + x) * (2.0 + x).ln())), 1.0, OscKind::Cos, 0.0),
    ]
}

/// Ten `(t, z, k)` with `|t|, |Im z| >= 0.2`, `|z| <= 3`, `k <= 2`.
pub fn residue_cases(seed: u64) -> Vec<(f64, Complex64, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < 10 {
        let t: f64 = rng.gen_range(-3.0..3.0);
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        if t.abs() < 0.2 || z.im.abs() < 0.2 || z.norm() > 3.0 {
            continue;
        }
        out.push((t, z, rng.gen_range(0..=2)));
    }
    out
}

/// `e^{iu}/(u - tz)^{k+1}`, whose PV integral the residue oracle gives.
pub fn residue_integrand(t: f64, z: Complex64, k: u32) -> impl Fn(f64) -> Complex64 {
    let w = z * t;
    move |u: f64| Complex64::new(0.0, u).exp() / (Complex64::new(u, 0.0) - w).powu(k + 1)
}
