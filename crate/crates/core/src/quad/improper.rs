//! Improper integrals as limits over geometric window sequences.

use num_complex::Complex64;

use super::limits::{LimitTracker, Step, WindowRule};
use super::{integrate_adaptive, PVResult, QuadConfig};

/// Share of the tolerance given to each window's finite quadrature.
const WINDOW_TOL_SHARE: f64 = 0.05;

/// Drive a window sequence: `window(j, cfg)` integrates window `j`, and the
/// partial sums are fed to a [`LimitTracker`].
pub(crate) fn run_windows<W>(cfg: &QuadConfig, rule: WindowRule, label: &str, mut window: W) -> (PVResult, Vec<Complex64>)
where
    W: FnMut(usize, &QuadConfig) -> PVResult,
{
    let mut tracker = LimitTracker::new(cfg.tol, rule);
    let mut evals = 0u64;
    let mut quad_err = 0.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let wcfg = cfg.with_tol(cfg.tol * WINDOW_TOL_SHARE);
    for j in 0.. {
        if cfg.cancelled() {
            let r = PVResult::failed("cancelled", evals);
            return (r, tracker.partials().to_vec());
        }
        let r = window(j, &wcfg.remaining(evals));
        evals += r.evaluations;
        if !r.converged {
            let hint = format!("{label}: window {j}: {}", r.divergence_hint);
            let (v, e) = tracker.estimate();
            let out = PVResult { value: v, abs_error_estimate: e, evaluations: evals, converged: false, divergence_hint: hint };
            return (out, tracker.partials().to_vec());
        }
        quad_err += r.abs_error_estimate;
        sum += r.value;
        match tracker.push(sum) {
            Step::Continue => {}
            Step::Converged => {
                let (v, e) = tracker.estimate();
                return (PVResult::ok(v, e + quad_err, evals), tracker.partials().to_vec());
            }
            Step::Diverged(why) => {
                let (v, e) = tracker.estimate();
                let out = PVResult {
                    value: v,
                    abs_error_estimate: e + quad_err,
                    evaluations: evals,
                    converged: false,
                    divergence_hint: format!("{label}: {why}"),
                };
                return (out, tracker.partials().to_vec());
            }
        }
    }
    unreachable!()
}

/// Which endpoint of `[lo, hi]` carries the singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lower,
    Upper,
}

/// `∫_lo^hi f` for `f` singular (or badly behaved) at one endpoint, as the
/// limit over windows that halve toward that endpoint.
pub fn integrate_toward_endpoint<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
    side: Side,
    cfg: &QuadConfig,
) -> PVResult {
    toward_endpoint_with_windows(f, lo, hi, side, cfg).0
}

pub(crate) fn toward_endpoint_with_windows<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    lo: f64,
    hi: f64,
    side: Side,
    cfg: &QuadConfig,
) -> (PVResult, Vec<Complex64>) {
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return (PVResult::failed("endpoint refinement needs a finite interval lo < hi", 0), Vec::new());
    }
    let w = hi - lo;
    let point = |h: f64| match side {
        Side::Lower => lo + h,
        Side::Upper => hi - h,
    };
    run_windows(cfg, WindowRule::default(), "endpoint limit", |j, c| {
        // Window j covers distances [w / 2^{j+1}, w / 2^j] from the endpoint.
        let near = w * 0.5f64.powi(j as i32 + 1);
        let far = w * 0.5f64.powi(j as i32);
        let (x0, x1) = (point(near), point(far));
        let (a, b) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
        integrate_adaptive(f, a, b, c)
    })
}

/// `∫_a^∞ f` by windows `[a, a+1]`, `[a+2^{j-1}, a+2^j]`.
pub(crate) fn half_line_with_windows<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    a: f64,
    cfg: &QuadConfig,
) -> (PVResult, Vec<Complex64>) {
    run_windows(cfg, WindowRule::default(), "window limit at infinity", |j, c| {
        let (lo, hi) = if j == 0 {
            (a, a + 1.0)
        } else {
            (a + 2f64.powi(j as i32 - 1), a + 2f64.powi(j as i32))
        };
        integrate_adaptive(f, lo, hi, c)
    })
}

/// `∫_a^b f` where either limit may be infinite.
pub fn integrate_improper<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> PVResult {
    if a.is_nan() || b.is_nan() {
        return PVResult::failed("NaN integration limit", 0);
    }
    if a == b {
        return PVResult::ok(Complex64::new(0.0, 0.0), 0.0, 0);
    }
    if a > b {
        let mut r = integrate_improper(f, b, a, cfg);
        r.value = -r.value;
        return r;
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => integrate_adaptive(f, a, b, cfg),
        (true, false) => half_line_with_windows(f, a, cfg).0,
        (false, true) => {
            let g = |u: f64| f(-u);
            half_line_with_windows(&g, -b, cfg).0
        }
        (false, false) => {
            let half = cfg.with_tol(cfg.tol * 0.5);
            let right = half_line_with_windows(f, 0.0, &half).0;
            let g = |u: f64| f(-u);
            let left = half_line_with_windows(&g, 0.0, &half.remaining(right.evaluations)).0;
            right.combine(left)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn exp_on_half_line() {
        let r = integrate_improper(&|x: f64| c((-x).exp()), 0.0, f64::INFINITY, &QuadConfig::default());
        assert!(r.converged, "{r:?}");
        assert!((r.value.re - 1.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn lorentzian_on_line() {
        let r = integrate_improper(&|x: f64| c(1.0 / (1.0 + x * x)), f64::NEG_INFINITY, f64::INFINITY, &QuadConfig::default());
        assert!(r.converged, "{r:?}");
        assert!((r.value.re - PI).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn one_over_x_diverges() {
        let r = integrate_improper(&|x: f64| c(1.0 / x), 1.0, f64::INFINITY, &QuadConfig::default());
        assert!(!r.converged);
        assert!(!r.divergence_hint.is_empty());
    }

    #[test]
    fn left_half_line() {
        let r = integrate_improper(&|x: f64| c(x.exp()), f64::NEG_INFINITY, 0.0, &QuadConfig::default());
        assert!((r.value.re - 1.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn endpoint_refinement_log_singularity() {
        // ∫_0^1 ln x dx = -1
        let r = integrate_toward_endpoint(&|x: f64| c(x.ln()), 0.0, 1.0, Side::Lower, &QuadConfig::default());
        assert!(r.converged, "{r:?}");
        assert!((r.value.re + 1.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn endpoint_refinement_detects_pole() {
        let r = integrate_toward_endpoint(&|x: f64| c(1.0 / (1.0 - x)), 0.0, 1.0, Side::Upper, &QuadConfig::default());
        assert!(!r.converged);
    }
}
