//! `∫_a^∞ h(x)·sin(ωx) dx` and the cosine analogue, summed as a series of
//! half-period integrals between consecutive zeros of the trigonometric factor.
//!
//! For eventually monotone `h → 0` the series alternates with decreasing
//! terms, so the tail after term `n` is bounded by `|T_{n+1}|`. Wynn's epsilon
//! on the partial sums accelerates slowly decaying amplitudes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::limits::wynn_epsilon;
use super::{integrate_adaptive, PVResult, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OscKind {
    Sin,
    Cos,
}

const MAX_TERMS: usize = 200_000;
const MIN_TERMS: usize = 6;
const SLICE_TOL_SHARE: f64 = 0.01;

pub fn integrate_oscillatory<A: Fn(f64) -> f64 + ?Sized>(
    amplitude: &A,
    omega: f64,
    kind: OscKind,
    a: f64,
    cfg: &QuadConfig,
) -> PVResult {
    if !(omega > 0.0 && omega.is_finite()) {
        return PVResult::failed("oscillatory quadrature needs a finite frequency > 0", 0);
    }
    if !a.is_finite() {
        return PVResult::failed("oscillatory quadrature needs a finite lower limit", 0);
    }
    let trig = |x: f64| match kind {
        OscKind::Sin => (omega * x).sin(),
        OscKind::Cos => (omega * x).cos(),
    };
    let f = |x: f64| Complex64::new(amplitude(x) * trig(x), 0.0);
    let half = std::f64::consts::PI / omega;
    let shift = match kind {
        OscKind::Sin => 0.0,
        OscKind::Cos => 0.5,
    };
    // Zeros of the trigonometric factor: x_k = (k + shift)·π/ω.
    let k0 = (a / half - shift).ceil();
    let zero = |k: f64| (k + shift) * half;
    let scfg = cfg.with_tol(cfg.tol * SLICE_TOL_SHARE);

    let mut evals = 0u64;
    let mut quad_err = 0.0;
    let head = integrate_adaptive(&f, a, zero(k0), &scfg);
    evals += head.evaluations;
    if !head.converged {
        let hint = format!("initial slice: {}", head.divergence_hint);
        return head.fail_with(hint);
    }
    quad_err += head.abs_error_estimate;
    let mut sum = head.value.re;
    let mut partials: Vec<Complex64> = vec![Complex64::new(sum, 0.0)];
    let mut terms: Vec<f64> = Vec::new();
    let mut estimates: Vec<f64> = Vec::new();
    let tiny = 0.1 * cfg.tol;

    for n in 0..MAX_TERMS {
        if cfg.cancelled() {
            return PVResult::failed("cancelled", evals);
        }
        if evals >= cfg.budget {
            return PVResult {
                value: Complex64::new(sum, 0.0),
                abs_error_estimate: terms.last().map_or(f64::INFINITY, |t| t.abs()),
                evaluations: evals,
                converged: false,
                divergence_hint: "evaluation budget exhausted in half-period series".into(),
            };
        }
        let k = k0 + n as f64;
        let r = integrate_adaptive(&f, zero(k), zero(k + 1.0), &scfg.remaining(evals));
        evals += r.evaluations;
        if !r.converged {
            let hint = format!("half-period slice {n}: {}", r.divergence_hint);
            return r.fail_with(hint);
        }
        quad_err += r.abs_error_estimate;
        let t = r.value.re;
        terms.push(t);
        sum += t;
        partials.push(Complex64::new(sum, 0.0));
        let start = partials.len().saturating_sub(16);
        let est = wynn_epsilon(&partials[start..]).re;
        estimates.push(est);

        let m = terms.len();
        if m < MIN_TERMS {
            continue;
        }
        // Alternating-series tail bound.
        if t.abs() <= tiny && terms[m - 2].abs() <= tiny {
            return PVResult::ok(Complex64::new(sum, 0.0), t.abs() + quad_err, evals);
        }
        // Terms that do not shrink mean a non-decaying amplitude; Wynn would
        // otherwise report the Cesàro mean of an oscillating sequence.
        let earlier = terms[m / 2].abs();
        let stalled = t.abs() >= (1.0 - 1e-6) * earlier || (m >= 64 && t.abs() > 0.99 * earlier);
        if m >= 16 && stalled {
            return PVResult {
                value: Complex64::new(est, 0.0),
                abs_error_estimate: t.abs(),
                evaluations: evals,
                converged: false,
                divergence_hint: "amplitude not decaying: half-period terms do not shrink".into(),
            };
        }
        let e = &estimates;
        let spread = (e[m - 1] - e[m - 2]).abs() + (e[m - 1] - e[m - 3]).abs();
        if !stalled && spread <= 0.5 * cfg.tol {
            return PVResult::ok(Complex64::new(est, 0.0), spread + quad_err, evals);
        }
    }
    PVResult {
        value: Complex64::new(sum, 0.0),
        abs_error_estimate: terms.last().map_or(f64::INFINITY, |t| t.abs()),
        evaluations: evals,
        converged: false,
        divergence_hint: format!("half-period series not settled after {MAX_TERMS} terms"),
    }
}
