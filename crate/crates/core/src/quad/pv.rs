//! Principal values.
//!
//! Finite singularity: `g(u) = f(x0+u) + f(x0-u)` is integrated over
//! `0 < u ≤ r`, so a simple pole's odd part cancels pointwise; the remaining
//! `ε → 0` limit is taken over windows `[r/2^{j+1}, r/2^j]`.
//!
//! Infinity: symmetric windows `|λ| < N_j`, `N_j = N_0·2^j`. Each shell
//! `N ≤ |λ| ≤ 2N` is integrated twice, plain and against the taper
//! `τ(|λ|/N)`. The tapered value `V(N) = I(N) + ∫_shell f·τ` is a weighted mean
//! of the truncated integrals `I(N')`, `N ≤ N' ≤ 2N`, which suppresses the
//! oscillating part of the truncation error. The limit is taken over `V`;
//! the gap `|I(2N) - V(N)|` must shrink as well, otherwise only averaged
//! values settle and the principal value does not exist.

use num_complex::Complex64;

use super::improper::{toward_endpoint_with_windows, Side};
use super::limits::{LimitTracker, Step, WindowRule};
use super::{integrate_adaptive, PVResult, QuadConfig};

/// Half-width of the innermost symmetric window at infinity.
pub const PV_N0: f64 = 16.0;

/// Half-width of the interval around a finite singularity handled by pairing.
const NEAR_RADIUS: f64 = 1.0;

/// Smooth cutoff: 1 on `s ≤ 1`, 0 on `s ≥ 2`, three continuous derivatives.
pub fn taper(s: f64) -> f64 {
    if s <= 1.0 {
        return 1.0;
    }
    if s >= 2.0 {
        return 0.0;
    }
    let u = s - 1.0;
    let u4 = u * u * u * u;
    1.0 - u4 * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)))
}

/// `∫_a^b f` split at `0` and `±PV_N0·2^k`. A single adaptive pass over a
/// wide core can step over a narrow feature near the origin; dyadic pieces
/// put nodes at every scale.
fn integrate_dyadic<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> PVResult {
    let reach = a.abs().max(b.abs());
    let mut cuts = vec![0.0];
    let mut m = PV_N0;
    while m < reach {
        cuts.extend([m, -m]);
        m *= 2.0;
    }
    cuts.retain(|&p| a < p && p < b);
    cuts.sort_by(f64::total_cmp);
    cuts.insert(0, a);
    cuts.push(b);
    let share = cfg.with_tol(cfg.tol / (cuts.len() - 1) as f64);
    let mut out = PVResult::ok(Complex64::new(0.0, 0.0), 0.0, 0);
    for w in cuts.windows(2) {
        let r = integrate_adaptive(f, w[0], w[1], &share.remaining(out.evaluations));
        out = out.combine(r);
        if !out.converged {
            break;
        }
    }
    out
}

/// `lim_{ε→0} (∫_a^{x0-ε} + ∫_{x0+ε}^b) f`.
pub fn pv_point<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, x0: f64, a: f64, b: f64, cfg: &QuadConfig) -> PVResult {
    if !(a.is_finite() && b.is_finite() && x0.is_finite()) || !(a < x0 && x0 < b) {
        return PVResult::failed("pv_point needs finite a < x0 < b", 0);
    }
    let r = (x0 - a).min(b - x0);
    let g = |u: f64| f(x0 + u) + f(x0 - u);
    let half = cfg.with_tol(cfg.tol * 0.5);
    let (near, _) = toward_endpoint_with_windows(&g, 0.0, r, Side::Lower, &half);
    let near = if near.converged {
        near
    } else {
        let hint = format!("ε-limit at x0 = {x0}: {}", near.divergence_hint);
        near.fail_with(hint)
    };
    let mut out = near;
    let rest = cfg.with_tol(cfg.tol * 0.25);
    if x0 - a > r {
        let left = integrate_adaptive(f, a, x0 - r, &rest.remaining(out.evaluations));
        out = out.combine(left);
    }
    if b - x0 > r {
        let right = integrate_adaptive(f, x0 + r, b, &rest.remaining(out.evaluations));
        out = out.combine(right);
    }
    out
}

/// `lim_{N→∞, ε→0} (∫_{-N}^{x0-ε} + ∫_{x0+ε}^{N}) f`; with `x0 = None` only the
/// symmetric limit at infinity is taken.
pub fn pv_double_limit<F: Fn(f64) -> Complex64 + ?Sized>(f: &F, x0: Option<f64>, cfg: &QuadConfig) -> PVResult {
    pv_double_limit_with_windows(f, x0, cfg).0
}

/// As [`pv_double_limit`], also returning the tapered window values `V(N_j)`.
pub fn pv_double_limit_with_windows<F: Fn(f64) -> Complex64 + ?Sized>(
    f: &F,
    x0: Option<f64>,
    cfg: &QuadConfig,
) -> (PVResult, Vec<Complex64>) {
    if let Some(x) = x0 {
        if !x.is_finite() {
            return (PVResult::failed("singularity must be finite", 0), Vec::new());
        }
    }
    let mut n0 = PV_N0;
    if let Some(x) = x0 {
        while n0 < x.abs() + 2.0 * NEAR_RADIUS {
            n0 *= 2.0;
        }
    }
    let inner_cfg = cfg.with_tol(cfg.tol * 0.25);

    // ε-limit and the untapered core |λ| < N_0.
    let base = match x0 {
        Some(x) => {
            let near = pv_point(f, x, x - NEAR_RADIUS, x + NEAR_RADIUS, &inner_cfg);
            if !near.converged {
                return (near, Vec::new());
            }
            let left = integrate_dyadic(f, -n0, x - NEAR_RADIUS, &inner_cfg.remaining(near.evaluations));
            let used = near.evaluations + left.evaluations;
            let right = integrate_dyadic(f, x + NEAR_RADIUS, n0, &inner_cfg.remaining(used));
            near.combine(left).combine(right)
        }
        None => {
            let paired = |u: f64| f(u) + f(-u);
            integrate_adaptive(&paired, 0.0, n0, &inner_cfg)
        }
    };
    if !base.converged {
        let hint = format!("core |λ| < {n0}: {}", base.divergence_hint);
        return (base.fail_with(hint), Vec::new());
    }
    let shell = |u: f64| f(u) + f(-u);
    let tail_cfg = cfg.with_tol(cfg.tol * 0.5);
    let rule = WindowRule {
        max_windows: 28,
        ..WindowRule::default()
    };
    let mut tracker = LimitTracker::new(tail_cfg.tol, rule);
    let wcfg = tail_cfg.with_tol(tail_cfg.tol * 0.05);
    let mut evals = base.evaluations;
    let mut quad_err = base.abs_error_estimate;
    // Untapered integral over |λ| < N_j, relative to the core.
    let mut plain_sum = Complex64::new(0.0, 0.0);
    let mut windows = Vec::new();
    let mut gaps: Vec<f64> = Vec::new();
    let fail = |value: Complex64, err: f64, evals: u64, hint: String| PVResult {
        value,
        abs_error_estimate: err,
        evaluations: evals,
        converged: false,
        divergence_hint: hint,
    };
    let mut settled: Option<(Complex64, f64)> = None;
    let (value, err) = loop {
        let j = windows.len() as i32;
        if j >= GAP_WINDOWS_MAX {
            let (v, e) = tracker.estimate();
            return (fail(v, e + quad_err, evals, "N-limit: window limit reached".into()), windows);
        }
        if cfg.cancelled() {
            return (PVResult::failed("cancelled", evals), windows);
        }
        let n = n0 * 2f64.powi(j);
        let plain = integrate_adaptive(&shell, n, 2.0 * n, &wcfg.remaining(evals));
        evals += plain.evaluations;
        let tapered_f = |u: f64| shell(u) * taper(u / n);
        let tapered = integrate_adaptive(&tapered_f, n, 2.0 * n, &wcfg.remaining(evals));
        evals += tapered.evaluations;
        let (v, e) = tracker.estimate();
        if !plain.converged || !tapered.converged {
            let why = if plain.converged { tapered.divergence_hint } else { plain.divergence_hint };
            return (fail(v, e, evals, format!("N-limit: shell N = {n}: {why}")), windows);
        }
        quad_err += plain.abs_error_estimate + tapered.abs_error_estimate;
        let v_n = base.value + plain_sum + tapered.value;
        windows.push(v_n);
        gaps.push((plain.value - tapered.value).norm());
        plain_sum += plain.value;
        if let Some((v, e)) = settled {
            if gaps_verdict(&gaps, cfg.tol).is_some() {
                break (v, e);
            }
            continue;
        }
        match tracker.push(v_n) {
            Step::Continue => {}
            Step::Diverged(why) => {
                let (v, e) = tracker.estimate();
                return (fail(v, e + quad_err, evals, format!("N-limit: {why}")), windows);
            }
            Step::Converged => {
                let (v, e) = tracker.estimate();
                if gaps_verdict(&gaps, cfg.tol).is_some() {
                    break (v, e);
                }
                // Value settled; keep widening only to judge the gaps.
                settled = Some((v, e));
            }
        }
    };
    if gaps_verdict(&gaps, cfg.tol) == Some(false) {
        let hint = "N-limit: truncated integrals keep oscillating; only averaged values settle".to_string();
        return (fail(value, err + quad_err, evals, hint), windows);
    }
    (PVResult::ok(value, err + quad_err, evals), windows)
}

const GAP_WINDOWS: usize = 8;
const GAP_WINDOWS_MAX: i32 = 28;

/// Plain and tapered shell integrals must approach each other:
/// `Some(true)` settled, `Some(false)` not settling, `None` undecided yet.
fn gaps_verdict(gaps: &[f64], tol: f64) -> Option<bool> {
    if gaps.iter().all(|&g| g <= tol) {
        return Some(true);
    }
    let m = gaps.len();
    if m < GAP_WINDOWS {
        return None;
    }
    let late = gaps[m - 3..].iter().cloned().fold(0.0, f64::max);
    let early = gaps[..3].iter().cloned().fold(0.0, f64::max);
    Some(late <= tol || late <= 0.25 * early)
}
