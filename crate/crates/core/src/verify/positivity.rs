//! Positivity and integral identities for half-line transforms of monotone
//! functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{half_line_shape, log_grid, real_fn, record_limit, Conv, FirstError, Verdict, TOL_IDENTITY};
use crate::expr::Expression;
use crate::quad::{
    half_line_with_windows, integrate_adaptive, integrate_oscillatory, run_windows, OscKind, PVResult, QuadConfig,
    WindowRule,
};
use crate::transforms::half_line_transform;

/// Inner quadratures run this much tighter than the identity tolerance.
const INNER_TOL: f64 = 1e-10;
const OUTER_TOL: f64 = 1e-7;

/// Points of the sign test: 64 log-spaced `t ∈ [1e-2, 1e2]`.
fn sign_grid() -> Vec<f64> {
    log_grid(1e-2, 1e2, 64)
}

fn value(r: PVResult) -> Result<f64, String> {
    if r.converged {
        Ok(r.value.re)
    } else {
        Err(r.divergence_hint)
    }
}

fn c(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `∫_0^∞ φ` with its window trace; `Err` makes the verdict inconclusive.
fn integral_of(v: &mut Verdict, label: &str, f: &dyn Fn(f64) -> f64, cfg: &QuadConfig) -> Result<f64, String> {
    let (r, partials) = half_line_with_windows(&|x: f64| c(f(x)), 0.0, cfg);
    match record_limit(v, label, &r, partials) {
        Conv::Converges => Ok(r.value.re),
        _ => Err(format!("{label} does not converge")),
    }
}

/// `∫_L^∞ trig(u)/u du`.
fn trig_tail(kind: OscKind, lower: f64) -> Result<f64, String> {
    if lower == 0.0 && kind == OscKind::Sin {
        return Ok(0.5 * PI);
    }
    value(integrate_oscillatory(&|u: f64| 1.0 / u, 1.0, kind, lower, &QuadConfig::new(1e-13)))
}

/// `g_m(t) = ∫_{L/t}^∞ φ(x) trig(xt) dx` with `L = mπ` (sine) or
/// `π(m - ½)` (cosine): `(-1)^m g_m ≥ 0`, and
/// `∫_0^∞ g_m(t)/t dt = ∫_L^∞ trig(u)/u du · ∫_0^∞ φ`.
fn tail_check(phi: &Expression, m: u32, kind: OscKind, cfg: &QuadConfig, name: &str) -> Verdict {
    let mut v = Verdict::new(name);
    let f = real_fn(phi);
    if let Err(why) = half_line_shape(&f, false) {
        return v.inconclusive(format!("hypothesis on φ: {why}"));
    }
    let integral = match integral_of(&mut v, "∫_0^∞ φ", &f, &cfg.with_tol(1e-10)) {
        Ok(i) => i,
        Err(why) => return v.inconclusive(format!("hypothesis: {why}")),
    };
    let lower = match kind {
        OscKind::Sin => m as f64 * PI,
        OscKind::Cos => (m as f64 - 0.5) * PI,
    };
    let inner = cfg.with_tol(INNER_TOL);
    let g = |t: f64| value(integrate_oscillatory(&f, t, kind, lower / t, &inner));
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };

    let mut min_signed = f64::INFINITY;
    for t in sign_grid() {
        match g(t) {
            Ok(val) => min_signed = min_signed.min(sign * val),
            Err(why) => return v.inconclusive(format!("g_m({t}) did not converge: {why}")),
        }
    }
    v.evidence("min (-1)^m g_m(t), t in [1e-2, 1e2]", min_signed, -cfg.tol);
    let sign_ok = min_signed > -cfg.tol;

    let errors = FirstError::default();
    let (r, partials) = half_line_with_windows(&|t: f64| c(errors.wrap(g(t)) / t), 0.0, &cfg.with_tol(OUTER_TOL));
    if let Some(why) = errors.take() {
        return v.inconclusive(format!("g_m did not converge inside ∫ g_m/t: {why}"));
    }
    if record_limit(&mut v, "∫_0^∞ g_m(t)/t dt", &r, partials) != Conv::Converges {
        return v.inconclusive("∫ g_m(t)/t dt did not converge");
    }
    let tail = match trig_tail(kind, lower) {
        Ok(t) => t,
        Err(why) => return v.inconclusive(format!("trigonometric tail: {why}")),
    };
    let identity_ok = v.sides(r.value, c(tail * integral), TOL_IDENTITY);
    v.decide(sign_ok && identity_ok)
}

/// `φ` decreasing with `∫_0^∞ φ < ∞`; `g_m(t) = ∫_{mπ/t}^∞ φ(x) sin(xt) dx`.
pub fn check_s1(phi: &Expression, m: u32, cfg: &QuadConfig) -> Verdict {
    tail_check(phi, m, OscKind::Sin, cfg, "S1")
}

/// Cosine analogue of [`check_s1`] with lower limit `π(m - ½)/t`, `m ≥ 1`.
pub fn check_s3(phi: &Expression, m: u32, cfg: &QuadConfig) -> Verdict {
    if m == 0 {
        return Verdict::new("S3").inconclusive("m must be at least 1");
    }
    tail_check(phi, m, OscKind::Cos, cfg, "S3")
}

fn value_at_zero(f: &dyn Fn(f64) -> f64) -> Result<f64, String> {
    let f0 = f(0.0);
    if f0.is_finite() {
        Ok(f0)
    } else {
        Err("f(0) is not finite".into())
    }
}

/// `f` decreasing, convex, `→ 0`: `F_c ≥ 0` and `∫_0^∞ F_c = √(π/2) f(0)`.
pub fn check_s2(f_expr: &Expression, cfg: &QuadConfig) -> Verdict {
    let mut v = Verdict::new("S2");
    let f = real_fn(f_expr);
    if let Err(why) = half_line_shape(&f, true) {
        return v.inconclusive(format!("hypothesis on f: {why}"));
    }
    let f0 = match value_at_zero(&f) {
        Ok(x) => x,
        Err(why) => return v.inconclusive(why),
    };
    let inner = cfg.with_tol(INNER_TOL);
    let fc = |t: f64| half_line_transform(&f, t, OscKind::Cos, &inner).map_err(|e| e.to_string());
    let mut min_fc = f64::INFINITY;
    for t in sign_grid() {
        match fc(t) {
            Ok(val) => min_fc = min_fc.min(val),
            Err(why) => return v.inconclusive(format!("F_c({t}): {why}")),
        }
    }
    v.evidence("min F_c(t), t in [1e-2, 1e2]", min_fc, -cfg.tol);
    let errors = FirstError::default();
    let (r, partials) = half_line_with_windows(&|t: f64| c(errors.wrap(fc(t))), 0.0, &cfg.with_tol(OUTER_TOL));
    if let Some(why) = errors.take() {
        return v.inconclusive(format!("F_c inside ∫ F_c: {why}"));
    }
    if record_limit(&mut v, "∫_0^∞ F_c(t) dt", &r, partials) != Conv::Converges {
        return v.inconclusive("∫ F_c did not converge");
    }
    let identity_ok = v.sides(r.value, c((0.5 * PI).sqrt() * f0), TOL_IDENTITY);
    v.decide(min_fc >= -cfg.tol && identity_ok)
}

/// `∫ |ψ|` over `[2^{-j}, 2^j]`, window `j ≥ 1` adding `[2^{-j-1}, 2^{-j}]`
/// and `[2^j, 2^{j+1}]` to the initial `[1/2, 2]`.
fn l1_on_half_line(psi: &dyn Fn(f64) -> f64, cfg: &QuadConfig) -> (PVResult, Vec<Complex64>) {
    let abs = |t: f64| c(psi(t).abs());
    run_windows(cfg, WindowRule::default(), "dyadic L1 windows", |j, wc| {
        if j == 0 {
            return integrate_adaptive(&abs, 0.5, 2.0, wc);
        }
        let s = 2f64.powi(j as i32);
        let lo = integrate_adaptive(&abs, 0.5 / s, 1.0 / s, wc);
        if !lo.converged {
            return lo;
        }
        let hi = integrate_adaptive(&abs, s, 2.0 * s, &wc.remaining(lo.evaluations));
        lo.combine(hi)
    })
}

/// `f` decreasing, convex, `→ 0`: `ψ(t) = F_s(t) - √(2/π) f(π/(2t))/t` is in
/// `L1(0, ∞)`; when `∫_0^∞ (f(x) - f(0))/x dx` converges, so is
/// `ψ₁(t) = F_s(t) - √(2/π) f(0)/t`.
pub fn check_3alpha(f_expr: &Expression, cfg: &QuadConfig) -> Verdict {
    let mut v = Verdict::new("3alpha");
    let f = real_fn(f_expr);
    if let Err(why) = half_line_shape(&f, true) {
        return v.inconclusive(format!("hypothesis on f: {why}"));
    }
    let f0 = match value_at_zero(&f) {
        Ok(x) => x,
        Err(why) => return v.inconclusive(why),
    };
    let s = (2.0 / PI).sqrt();
    let inner = cfg.with_tol(INNER_TOL * 0.01);
    let l1_cfg = cfg.with_tol(cfg.tol.max(1e-5));
    let errors = FirstError::default();
    let fs = |t: f64| errors.wrap(half_line_transform(&f, t, OscKind::Sin, &inner).map_err(|e| e.to_string()));

    let psi = |t: f64| fs(t) - s * f(0.5 * PI / t) / t;
    let (r, partials) = l1_on_half_line(&psi, &l1_cfg);
    if let Some(why) = errors.take() {
        return v.inconclusive(format!("F_s: {why}"));
    }
    let part1 = record_limit(&mut v, "∫|ψ| over [2^-j, 2^j]", &r, partials);
    if part1 == Conv::Unknown {
        return v.inconclusive("L1 test for ψ undecided");
    }

    // Extra condition: ∫_0^1 by adaptive quadrature, ∫_1^∞ by windows.
    let extra = |x: f64| c((f(x) - f0) / x);
    let head = integrate_adaptive(&extra, 0.0, 1.0, &cfg.with_tol(1e-9));
    let (tail, tail_partials) = half_line_with_windows(&extra, 1.0, &cfg.with_tol(1e-9));
    let extra_conv = if head.converged { record_limit(&mut v, "∫ (f(x) - f(0))/x dx", &tail, tail_partials) } else { Conv::Unknown };
    let mut part2 = Conv::Converges;
    match extra_conv {
        Conv::Converges => {
            let psi1 = |t: f64| fs(t) - s * f0 / t;
            let (r1, p1) = l1_on_half_line(&psi1, &l1_cfg);
            if let Some(why) = errors.take() {
                return v.inconclusive(format!("F_s: {why}"));
            }
            part2 = record_limit(&mut v, "∫|ψ₁| over [2^-j, 2^j]", &r1, p1);
            if part2 == Conv::Unknown {
                return v.inconclusive("L1 test for ψ₁ undecided");
            }
        }
        Conv::Diverges => v.note("part (ii) skipped: ∫ (f(x) - f(0))/x dx diverges"),
        Conv::Unknown => v.note("part (ii) skipped: ∫ (f(x) - f(0))/x dx undecided"),
    }
    v.decide(part1 == Conv::Converges && part2 == Conv::Converges)
}
