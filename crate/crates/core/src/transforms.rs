//! Transforms of measures and functions on the line.
//!
//! Conventions:
//! - `μ̂(x) = (2π)^{-1/2} ∫ e^{-ixt} dμ(t)`;
//! - `F_c`, `F_s` carry the factor `√(2/π)` and integrate over `(0, ∞)`;
//! - `(Hφ)(x) = (1/π) PV∫ φ(t)/(x - t) dt`, principal value at `t = x` and
//!   symmetric truncation at infinity;
//! - the Bochner transform of order `k` integrates
//!   `K_k(x, t) = (e^{-ixt} - P_{k-1}(x, t))/(-ix)^k`, where the Taylor
//!   polynomial `P_{k-1}` is present only for `|x| ≤ 1`.
//!
//! Fourier and Bochner transforms of densities go through piecewise Legendre
//! tables ([`crate::spectral`]). The table route is exact in the frequency,
//! so one [`BochnerTransform`] serves all `t`. The direct route
//! ([`fourier_measure_direct`], [`bochner_transform_direct`]) integrates the
//! kernel with the general quadrature engine and serves as an oracle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::expr::Expression;
use crate::measure::{Measure, Piece};
use crate::quad::{
    integrate_adaptive, integrate_improper, integrate_oscillatory, pv_double_limit, OscKind, PVResult, QuadConfig,
};
use crate::spectral::{LegendreTable, Segment};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("Im z must be nonzero")]
    RealZ,
    #[error("frequency must be finite and > 0, got {0}")]
    Frequency(f64),
    #[error("measure is not in M_{k}: {diagnostics}")]
    NotInClass { k: u32, diagnostics: String },
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn inv_sqrt_2pi() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

fn converged(r: PVResult) -> Result<Complex64, TransformError> {
    if r.converged {
        Ok(r.value)
    } else {
        Err(TransformError::NonConvergence(r.divergence_hint))
    }
}

/// `(-ix)^k`.
fn neg_i_pow(x: f64, k: u32) -> Complex64 {
    Complex64::new(0.0, -x).powu(k)
}

/// The Bochner kernel `K_k(x, t)`. Near `x = 0` (`|xt| ≤ 1`) it is summed as
/// `t^k Σ_n (-ixt)^n/(n+k)!`, whose value at `x = 0` is `t^k/k!`.
pub fn bochner_kernel(k: u32, x: f64, t: f64) -> Complex64 {
    let e = Complex64::new(0.0, -x * t).exp();
    if k == 0 {
        return e;
    }
    if x.abs() > 1.0 {
        return e / neg_i_pow(x, k);
    }
    let z = Complex64::new(0.0, -x * t);
    if (x * t).abs() <= 1.0 {
        let mut fact = 1.0;
        for j in 2..=k {
            fact *= j as f64;
        }
        let mut term = c(1.0 / fact);
        let mut sum = term;
        for n in 1..40u32 {
            term *= z / (n + k) as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        return sum * t.powi(k as i32);
    }
    let mut p = c(0.0);
    let mut term = c(1.0);
    for m in 0..k {
        if m > 0 {
            term *= z / m as f64;
        }
        p += term;
    }
    (e - p) / neg_i_pow(x, k)
}

/// Value of the Carleman transform on one half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CarlemanValue {
    pub z: Complex64,
    pub value: Complex64,
    /// Quadrature error estimate of the density part; atoms are exact.
    pub abs_error_estimate: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Upper,
    Lower,
}

/// `F₊(z) = ∫′_0^∞ e^{itz} dμ(t)` for `Im z > 0` and
/// `F₋(z) = -∫′_{-∞}^0 e^{itz} dμ(t)` for `Im z < 0`. The prime counts an
/// atom at `0` with half its weight.
pub fn carleman(mu: &Measure, z: Complex64, cfg: &QuadConfig) -> Result<CarlemanValue, TransformError> {
    if !(z.im != 0.0 && z.re.is_finite() && z.im.is_finite()) {
        return Err(TransformError::RealZ);
    }
    let upper = z.im > 0.0;
    let on_side = |t: f64| if upper { t > 0.0 } else { t < 0.0 };
    let kernel = |t: f64| (Complex64::i() * z * t).exp();
    let mut sum = c(0.0);
    for a in mu.atoms() {
        if a.t == 0.0 {
            sum += a.weight * 0.5;
        } else if on_side(a.t) {
            sum += a.weight * kernel(a.t);
        }
    }
    let half = if upper { mu.restrict(0.0, f64::INFINITY) } else { mu.restrict(f64::NEG_INFINITY, 0.0) };
    let pieces = Measure::new(Vec::new(), half.pieces().to_vec()).expect("pieces of a measure stay valid");
    let r = pieces.integrate(&kernel, cfg);
    let abs_error_estimate = r.abs_error_estimate;
    sum += converged(r)?;
    Ok(CarlemanValue {
        z,
        value: if upper { sum } else { -sum },
        abs_error_estimate,
        branch: if upper { Branch::Upper } else { Branch::Lower },
    })
}

/// `F_c(t) = √(2/π) ∫_0^∞ f(x) cos(xt) dx`.
pub fn cosine_transform(f: &Expression, t: f64, cfg: &QuadConfig) -> Result<f64, TransformError> {
    half_line_transform(&|x| f.eval_or_nan(x), t, OscKind::Cos, cfg)
}

/// `F_s(t) = √(2/π) ∫_0^∞ f(x) sin(xt) dx`.
pub fn sine_transform(f: &Expression, t: f64, cfg: &QuadConfig) -> Result<f64, TransformError> {
    half_line_transform(&|x| f.eval_or_nan(x), t, OscKind::Sin, cfg)
}

/// Cosine or sine transform of a closure.
pub fn half_line_transform(
    f: &dyn Fn(f64) -> f64,
    t: f64,
    kind: OscKind,
    cfg: &QuadConfig,
) -> Result<f64, TransformError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(TransformError::Frequency(t));
    }
    let r = integrate_oscillatory(f, t, kind, 0.0, cfg);
    Ok(converged(r)?.re * (2.0 / PI).sqrt())
}

/// `(Hφ)(x)` with diagnostics.
pub fn hilbert_line_pv(phi: &dyn Fn(f64) -> Complex64, x: f64, cfg: &QuadConfig) -> PVResult {
    let f = |t: f64| phi(t) / (x - t);
    let mut r = pv_double_limit(&f, Some(x), cfg);
    r.value /= PI;
    r.abs_error_estimate /= PI;
    r
}

/// `(Hφ)(x) = (1/π) PV∫ φ(t)/(x - t) dt`.
pub fn hilbert_line(phi: &dyn Fn(f64) -> Complex64, x: f64, cfg: &QuadConfig) -> Result<Complex64, TransformError> {
    converged(hilbert_line_pv(phi, x, cfg))
}

/// `(hf)(x) = (1/π) PV∫ (1/(x - t) + t/(1 + t²)) f(t) dt`, defined for
/// `∫ |f|²/(1+t²) < ∞`.
pub fn hilbert_generalized_pv(f: &dyn Fn(f64) -> f64, x: f64, cfg: &QuadConfig) -> PVResult {
    let g = |t: f64| c((1.0 / (x - t) + t / (1.0 + t * t)) * f(t));
    let mut r = pv_double_limit(&g, Some(x), cfg);
    r.value /= PI;
    r.abs_error_estimate /= PI;
    r
}

pub fn hilbert_generalized(f: &dyn Fn(f64) -> f64, x: f64, cfg: &QuadConfig) -> Result<f64, TransformError> {
    Ok(converged(hilbert_generalized_pv(f, x, cfg))?.re)
}

/// Levels of the dyadic annuli `2^{-ℓ-1} ≤ |x| ≤ 2^{-ℓ}` tabulated for the
/// Bochner kernel; beyond `|t| = 2^MAX_LEVEL` the core `|x| < 2^{-MAX_LEVEL}`
/// is integrated adaptively with the oscillating kernel.
const MAX_LEVEL: u32 = 24;
/// Largest tail cutoff tried for unbounded pieces.
const MAX_CUTOFF: f64 = 1e15;

/// Prepared Bochner transform `μ̂(k, ·)` of a measure in `M_k`. Order 0 is
/// the Fourier transform.
#[derive(Debug, Clone)]
pub struct BochnerTransform {
    k: u32,
    atoms: Vec<(f64, Complex64)>,
    /// `|x| ≥ 1` for `k ≥ 1`; the whole line for `k = 0`.
    outer: Option<LegendreTable>,
    /// Dyadic annuli inside `[-1, 1]`, `k ≥ 1` only.
    inner: Option<LegendreTable>,
    /// Pieces meeting `(-1/8, 1/8)`, integrated directly at each `t`.
    core: Vec<Piece>,
    cfg: QuadConfig,
    /// Fit error plus neglected tail mass, before the `(2π)^{-1/2}` factor.
    static_error: f64,
}

impl BochnerTransform {
    pub fn new(mu: &Measure, k: u32, cfg: &QuadConfig) -> Result<BochnerTransform, TransformError> {
        let report = mu.in_class_mk(k, &cfg.with_tol(cfg.tol.max(1e-10)));
        if !report.in_class {
            return Err(TransformError::NotInClass {
                k,
                diagnostics: report.diagnostics,
            });
        }
        let atoms = mu.atoms().iter().map(|a| (a.t, a.weight)).collect();
        let tol = cfg.tol;
        let mut static_error = 0.0;
        let mut outer_segs = Vec::new();
        let mut inner_segs = Vec::new();
        let mut core = Vec::new();
        for p in mu.pieces() {
            let (a, b) = truncate(p, k, 0.01 * tol, cfg)?;
            static_error += 0.01 * tol * ((a > p.a) as u8 + (b < p.b) as u8) as f64;
            if k == 0 {
                push_split(&mut outer_segs, a, b, &[0.0], 0);
                continue;
            }
            push_split(&mut outer_segs, a, b.min(-1.0), &[], 0);
            push_split(&mut outer_segs, a.max(1.0), b, &[], 0);
            for l in 0..MAX_LEVEL {
                let hi = 0.5f64.powi(l as i32);
                let lo = 0.5 * hi;
                push_split(&mut inner_segs, a.max(lo), b.min(hi), &[], l);
                push_split(&mut inner_segs, a.max(-hi), b.min(-lo), &[], l);
            }
            if a < 0.125 && b > -0.125 {
                core.push(p.clone());
            }
        }
        let density = |x: f64| -> Complex64 {
            mu.pieces()
                .iter()
                .find(|p| p.a <= x && x <= p.b)
                .map_or(c(0.0), |p| p.density(x))
        };
        let table_tol = 0.25 * tol;
        let outer = if outer_segs.is_empty() {
            None
        } else {
            let g = |x: f64| if k == 0 { density(x) } else { density(x) / neg_i_pow(x, k) };
            let t = LegendreTable::build(&g, &outer_segs, 0, table_tol).map_err(TransformError::NonConvergence)?;
            static_error += t.fit_error;
            Some(t)
        };
        let inner = if inner_segs.is_empty() {
            None
        } else {
            let g = |x: f64| density(x) / neg_i_pow(x, k);
            let t = LegendreTable::build(&g, &inner_segs, k as usize, table_tol)
                .map_err(TransformError::NonConvergence)?;
            static_error += t.fit_error;
            Some(t)
        };
        Ok(BochnerTransform {
            k,
            atoms,
            outer,
            inner,
            core,
            cfg: cfg.clone(),
            static_error,
        })
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    /// `μ̂(k, t)` with an error estimate.
    pub fn eval_with_error(&self, t: f64) -> Result<(Complex64, f64), TransformError> {
        let k = self.k;
        let mut sum = self.atoms.iter().fold(c(0.0), |s, &(x, w)| s + w * bochner_kernel(k, x, t));
        let mut err = self.static_error;
        if let Some(outer) = &self.outer {
            sum += outer.fourier(t, 1);
        }
        if k >= 1 {
            // Annuli with |x| ≥ δ, and δ ≤ min(1/8, 1/|t|) so the series
            // kernel is used on the core.
            let need = if t.abs() > 1.0 { t.abs().log2().ceil() as u32 } else { 0 };
            let levels = need.clamp(3, MAX_LEVEL);
            let delta = 0.5f64.powi(levels as i32);
            if let Some(inner) = &self.inner {
                sum += inner.fourier(t, levels);
                let mut tm = 1.0;
                for m in 0..k as usize {
                    if m > 0 {
                        tm *= t / m as f64;
                    }
                    sum -= inner.moment(m, levels) * tm;
                }
            }
            let share = self.cfg.with_tol(self.cfg.tol * 0.25 / self.core.len().max(1) as f64);
            for p in &self.core {
                let (a, b) = (p.a.max(-delta), p.b.min(delta));
                if a >= b {
                    continue;
                }
                let f = |x: f64| p.density(x) * bochner_kernel(k, x, t);
                for (lo, hi) in [(a, b.min(0.0)), (a.max(0.0), b)] {
                    if lo < hi {
                        let r = integrate_adaptive(&f, lo, hi, &share);
                        if !r.converged {
                            return Err(TransformError::NonConvergence(format!(
                                "core |x| < {delta}: {}",
                                r.divergence_hint
                            )));
                        }
                        sum += r.value;
                        err += r.abs_error_estimate;
                    }
                }
            }
        }
        Ok((sum * inv_sqrt_2pi(), err * inv_sqrt_2pi()))
    }

    pub fn eval(&self, t: f64) -> Result<Complex64, TransformError> {
        Ok(self.eval_with_error(t)?.0)
    }
}

/// Append `[a, b]` split at the cut points inside it.
fn push_split(out: &mut Vec<Segment>, a: f64, b: f64, cuts: &[f64], level: u32) {
    if !(a < b) {
        return;
    }
    let mut lo = a;
    for &cut in cuts {
        if lo < cut && cut < b {
            out.push(Segment { a: lo, b: cut, level });
            lo = cut;
        }
    }
    out.push(Segment { a: lo, b, level });
}

/// Finite interval carrying all but `budget` of `∫ |ρ(x)|/max(1,|x|)^k`
/// on each unbounded side of `p`.
fn truncate(p: &Piece, k: u32, budget: f64, cfg: &QuadConfig) -> Result<(f64, f64), TransformError> {
    let weight = |x: f64| p.density(x).norm() / x.abs().max(1.0).powi(k as i32);
    let cut = |sign: f64, start: f64| -> Result<f64, TransformError> {
        let mut t = (2.0 * start.abs()).max(2.0);
        let tail_cfg = cfg.with_tol(budget * 0.1);
        while t <= MAX_CUTOFF {
            let f = |u: f64| c(weight(sign * u));
            let r = integrate_improper(&f, t, f64::INFINITY, &tail_cfg);
            if r.converged && r.value.re + r.abs_error_estimate <= budget {
                return Ok(sign * t);
            }
            t *= 2.0;
        }
        Err(TransformError::NonConvergence(format!(
            "tail mass of the piece on ({}, {}) does not fall below {budget:e}",
            p.a, p.b
        )))
    };
    let a = if p.a == f64::NEG_INFINITY { cut(-1.0, p.b.min(0.0))? } else { p.a };
    let b = if p.b == f64::INFINITY { cut(1.0, p.a.max(0.0))? } else { p.b };
    Ok((a, b))
}

/// `μ̂(x) = (2π)^{-1/2} ∫ e^{-ixt} dμ(t)`.
pub fn fourier_measure(mu: &Measure, x: f64, cfg: &QuadConfig) -> Result<Complex64, TransformError> {
    BochnerTransform::new(mu, 0, cfg)?.eval(x)
}

/// Bochner transform `μ̂(k, t)`; order 0 is [`fourier_measure`].
pub fn bochner_transform(mu: &Measure, k: u32, t: f64, cfg: &QuadConfig) -> Result<Complex64, TransformError> {
    BochnerTransform::new(mu, k, cfg)?.eval(t)
}

/// `μ̂(x)` by direct quadrature of `e^{-ixt}` against `μ`.
pub fn fourier_measure_direct(mu: &Measure, x: f64, cfg: &QuadConfig) -> Result<Complex64, TransformError> {
    bochner_transform_direct(mu, 0, x, cfg)
}

/// `μ̂(k, t)` by direct quadrature of the kernel against `μ`.
pub fn bochner_transform_direct(mu: &Measure, k: u32, t: f64, cfg: &QuadConfig) -> Result<Complex64, TransformError> {
    let kern = |x: f64| bochner_kernel(k, x, t);
    // Split at ±1 and 0 where the kernel changes form or densities kink.
    let cuts = Measure::linear_combination(&[(c(1.0), mu)]);
    let mut pieces = Vec::new();
    for p in cuts.pieces() {
        let mut lo = p.a;
        for cut in [-1.0, 0.0, 1.0] {
            if lo < cut && cut < p.b {
                pieces.push(Piece::new(lo, cut, p.re.clone(), p.im.clone()));
                lo = cut;
            }
        }
        pieces.push(Piece::new(lo, p.b, p.re.clone(), p.im.clone()));
    }
    let split = Measure::new(mu.atoms().to_vec(), pieces).expect("splitting keeps pieces disjoint");
    Ok(converged(split.integrate(&kern, cfg))? * inv_sqrt_2pi())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn fourier_of_dirac_and_shifted_dirac() {
        let cfg = QuadConfig::new(1e-10);
        let d0 = Measure::dirac(0.0, c(1.0));
        for x in [-3.0, 0.0, 7.5] {
            assert!(close(fourier_measure(&d0, x, &cfg).unwrap(), c(inv_sqrt_2pi()), 1e-15));
        }
        let d1 = Measure::dirac(1.0, c(1.0));
        assert!(close(fourier_measure(&d1, PI, &cfg).unwrap(), c(-inv_sqrt_2pi()), 1e-15));
    }

    #[test]
    fn fourier_of_two_sided_exponential() {
        let cfg = QuadConfig::new(1e-10);
        let mu = Measure::density(f64::NEG_INFINITY, f64::INFINITY, "exp(-abs(t))").unwrap();
        let ft = BochnerTransform::new(&mu, 0, &cfg).unwrap();
        for x in [0.0, 0.5, -2.0, 40.0, 3000.0] {
            let want = (2.0 / PI).sqrt() / (1.0 + x * x);
            let got = ft.eval(x).unwrap();
            assert!(close(got, c(want), 1e-9), "x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn direct_route_agrees_with_tables() {
        let cfg = QuadConfig::new(1e-9);
        let mu = Measure::density(f64::NEG_INFINITY, f64::INFINITY, "exp(-t^2/2)").unwrap();
        for x in [0.0, 1.0, 2.5] {
            let a = fourier_measure(&mu, x, &cfg).unwrap();
            let b = fourier_measure_direct(&mu, x, &cfg).unwrap();
            let want = (-x * x / 2.0).exp();
            assert!(close(a, c(want), 1e-8) && close(b, c(want), 1e-8), "x={x}: {a} {b} {want}");
        }
    }

    #[test]
    fn kernel_limit_at_origin() {
        assert!(close(bochner_kernel(2, 0.0, 3.0), c(4.5), 1e-15));
        assert!(close(bochner_kernel(1, 0.0, -2.0), c(-2.0), 1e-15));
        // Continuity across the series/closed-form switch at |xt| = 1.
        for k in 1..=3 {
            let a = bochner_kernel(k, 0.5 - 1e-12, 2.0);
            let b = bochner_kernel(k, 0.5 + 1e-12, 2.0);
            assert!(close(a, b, 1e-10), "k={k}: {a} {b}");
        }
    }

    #[test]
    fn bochner_order_one_derivative_is_fourier() {
        let cfg = QuadConfig::new(1e-10);
        let mu = Measure::density(f64::NEG_INFINITY, f64::INFINITY, "exp(-abs(t))").unwrap();
        let b1 = BochnerTransform::new(&mu, 1, &cfg).unwrap();
        let b0 = BochnerTransform::new(&mu, 0, &cfg).unwrap();
        let h = 1e-3;
        for t in [-1.0, 0.5, 2.0] {
            let d = (b1.eval(t + h).unwrap() - b1.eval(t - h).unwrap()) / (2.0 * h);
            assert!(close(d, b0.eval(t).unwrap(), 1e-5), "t={t}");
        }
    }

    #[test]
    fn bochner_tables_match_direct_route() {
        let cfg = QuadConfig::new(1e-9);
        let mu = Measure::density(f64::NEG_INFINITY, f64::INFINITY, "exp(-abs(t))").unwrap();
        for k in 1..=2 {
            let b = BochnerTransform::new(&mu, k, &cfg).unwrap();
            for t in [-3.0, 0.0, 0.7, 20.0] {
                let a = b.eval(t).unwrap();
                let d = bochner_transform_direct(&mu, k, t, &cfg).unwrap();
                assert!(close(a, d, 1e-7), "k={k} t={t}: {a} vs {d}");
            }
        }
    }

    #[test]
    fn bochner_order_zero_is_fourier() {
        let cfg = QuadConfig::new(1e-9);
        let mu = Measure::dirac(1.0, c(1.0));
        let t = 0.3;
        assert_eq!(bochner_transform(&mu, 0, t, &cfg).unwrap(), fourier_measure(&mu, t, &cfg).unwrap());
        assert!(close(fourier_measure(&mu, t, &cfg).unwrap(), Complex64::new(0.0, -t).exp() * inv_sqrt_2pi(), 1e-15));
    }

    #[test]
    fn lebesgue_is_rejected_at_order_one() {
        let cfg = QuadConfig::new(1e-8);
        let leb = Measure::density(f64::NEG_INFINITY, f64::INFINITY, "1").unwrap();
        assert!(matches!(BochnerTransform::new(&leb, 1, &cfg), Err(TransformError::NotInClass { .. })));
        assert!(BochnerTransform::new(&leb, 2, &cfg).is_ok());
    }

    #[test]
    fn carleman_examples() {
        let cfg = QuadConfig::new(1e-10);
        let d0 = Measure::dirac(0.0, c(1.0));
        let v = carleman(&d0, Complex64::i(), &cfg).unwrap();
        assert_eq!(v.branch, Branch::Upper);
        assert!(close(v.value, c(0.5), 1e-15));
        let right = Measure::density(0.0, f64::INFINITY, "exp(-t)").unwrap();
        assert!(close(carleman(&right, Complex64::i(), &cfg).unwrap().value, c(0.5), 1e-9));
        let left = Measure::density(f64::NEG_INFINITY, 0.0, "exp(t)").unwrap();
        let v = carleman(&left, -Complex64::i(), &cfg).unwrap();
        assert_eq!(v.branch, Branch::Lower);
        assert!(close(v.value, c(-0.5), 1e-9));
        assert_eq!(carleman(&d0, c(1.0), &cfg), Err(TransformError::RealZ));
    }

    #[test]
    fn cosine_and_sine_of_exponential() {
        let cfg = QuadConfig::new(1e-10);
        let f = Expression::parse("exp(-x)").unwrap();
        let s = (2.0 / PI).sqrt();
        assert!((cosine_transform(&f, 1.0, &cfg).unwrap() - s * 0.5).abs() < 1e-9);
        assert!((sine_transform(&f, 1.0, &cfg).unwrap() - s * 0.5).abs() < 1e-9);
        assert!((sine_transform(&f, 1e-3, &cfg).unwrap() - s * 1e-3).abs() < 1e-6);
        assert!(matches!(sine_transform(&f, 0.0, &cfg), Err(TransformError::Frequency(_))));
    }

    #[test]
    fn hilbert_examples() {
        let cfg = QuadConfig::new(1e-7);
        let lorentz = |t: f64| c(1.0 / (1.0 + t * t));
        assert!(close(hilbert_line(&lorentz, 1.0, &cfg).unwrap(), c(0.5), 1e-6));
        assert!(close(hilbert_line(&lorentz, 0.0, &cfg).unwrap(), c(0.0), 1e-6));
        assert!(close(hilbert_line(&|_| c(2.0), 0.3, &cfg).unwrap(), c(0.0), 1e-6));
        let g = hilbert_generalized(&|t| 1.0 / (1.0 + t * t), 1.0, &cfg).unwrap();
        assert!((g - 0.5).abs() < 2e-6);
        assert!(hilbert_generalized(&|_| 1.0, 0.0, &cfg).unwrap().abs() < 1e-6);
        assert_eq!(hilbert_generalized(&|_| 0.0, 0.4, &cfg).unwrap(), 0.0);
    }
}
