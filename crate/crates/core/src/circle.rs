//! Trigonometric polynomials on the unit circle `T`, as elements of the
//! Wiener algebra: `φ(ζ) = Σ c_n ζ^n` with norm `Σ|c_n|`.
//!
//! Identities with a closed form in coefficient space (Cauchy integral,
//! principal value on `T`) are also computed by quadrature over the
//! counterclockwise circle, and the two routes must agree.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::{integrate_adaptive, LimitTracker, PVResult, QuadConfig, Step, WindowRule};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircleError {
    #[error("|z| = {0} must differ from 1")]
    OnCircle(f64),
    #[error("|z| = {0} must equal 1")]
    OffCircle(f64),
    #[error("coefficient c_0 = {0} must vanish")]
    NonZeroMean(Complex64),
    #[error("coefficient n = {0} listed twice")]
    DuplicateIndex(i64),
    #[error("coefficient n = {0} is not finite")]
    NonFinite(i64),
    #[error("invalid coefficient JSON: {0}")]
    Json(String),
    #[error("coefficient formula {formula} and quadrature {quadrature} differ by {gap:e}")]
    Inconsistent {
        formula: Complex64,
        quadrature: Complex64,
        gap: f64,
    },
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
}

/// Finitely supported coefficients `c_n`; zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoeffSeq {
    coeffs: BTreeMap<i64, Complex64>,
    /// Caller-supplied bound on `Σ|c_n|` over the truncated indices.
    pub tail_bound: f64,
}

impl CoeffSeq {
    pub fn new() -> CoeffSeq {
        CoeffSeq::default()
    }

    pub fn monomial(n: i64, c: Complex64) -> CoeffSeq {
        let mut w = CoeffSeq::new();
        w.set(n, c);
        w
    }

    pub fn from_pairs(pairs: &[(i64, Complex64)]) -> Result<CoeffSeq, CircleError> {
        let mut w = CoeffSeq::new();
        let mut seen = std::collections::BTreeSet::new();
        for &(n, c) in pairs {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(CircleError::NonFinite(n));
            }
            if !seen.insert(n) {
                return Err(CircleError::DuplicateIndex(n));
            }
            w.set(n, c);
        }
        Ok(w)
    }

    pub fn set(&mut self, n: i64, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, c);
        }
    }

    pub fn get(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    /// Nonzero coefficients in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `max |n|` over the support, 0 when empty.
    pub fn degree(&self) -> u64 {
        self.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn in_w0(&self) -> bool {
        !self.coeffs.contains_key(&0)
    }

    fn map(&self, f: impl Fn(i64, Complex64) -> Complex64) -> CoeffSeq {
        let mut out = CoeffSeq {
            coeffs: BTreeMap::new(),
            tail_bound: self.tail_bound,
        };
        for (n, c) in self.iter() {
            out.set(n, f(n, c));
        }
        out
    }

    pub fn filter(&self, keep: impl Fn(i64) -> bool) -> CoeffSeq {
        self.map(|n, c| if keep(n) { c } else { Complex64::new(0.0, 0.0) })
    }

    pub fn add(&self, other: &CoeffSeq) -> CoeffSeq {
        let mut out = self.clone();
        for (n, c) in other.iter() {
            out.set(n, out.get(n) + c);
        }
        out.tail_bound += other.tail_bound;
        out
    }

    pub fn scale(&self, s: Complex64) -> CoeffSeq {
        let mut out = self.map(|_, c| c * s);
        out.tail_bound *= s.norm();
        out
    }

    /// `Σ c_n z^n` for any nonzero `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.iter().map(|(n, c)| c * z.powi(n as i32)).sum()
    }

    pub fn from_json(text: &str) -> Result<CoeffSeq, CircleError> {
        let spec: CoeffSpec = serde_json::from_str(text).map_err(|e| CircleError::Json(e.to_string()))?;
        let pairs: Vec<(i64, Complex64)> = spec.coeffs.iter().map(|c| (c.n, Complex64::new(c.re, c.im))).collect();
        let mut w = CoeffSeq::from_pairs(&pairs)?;
        w.tail_bound = spec.tail_bound;
        Ok(w)
    }

    pub fn to_spec(&self) -> CoeffSpec {
        CoeffSpec {
            coeffs: self.iter().map(|(n, c)| CoeffEntry { n, re: c.re, im: c.im }).collect(),
            tail_bound: self.tail_bound,
        }
    }
}

impl fmt::Display for CoeffSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (n, c)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "c[{n}]={c}")?;
        }
        write!(f, "}}")
    }
}

/// JSON form `{"coeffs": [{"n": 1, "re": 1.0, "im": 0.0}, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffSpec {
    pub coeffs: Vec<CoeffEntry>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub tail_bound: f64,
}

fn is_zero(v: &f64) -> bool {
    *v == 0.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub n: i64,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

/// `Σ|c_n|` over the stored support.
pub fn wiener_norm(w: &CoeffSeq) -> f64 {
    w.iter().map(|(_, c)| c.norm()).sum()
}

/// `φ(e^{ix}) = Σ c_n e^{inx}`.
pub fn eval_on_circle(w: &CoeffSeq, x: f64) -> Complex64 {
    w.iter().map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * x)).sum()
}

/// A value from the coefficient formula and its quadrature cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualValue {
    pub value: Complex64,
    pub quadrature: Complex64,
    pub gap: f64,
}

fn cross_check(formula: Complex64, quadrature: Complex64, tol: f64) -> Result<DualValue, CircleError> {
    let gap = (formula - quadrature).norm();
    if gap > 10.0 * tol {
        return Err(CircleError::Inconsistent {
            formula,
            quadrature,
            gap,
        });
    }
    Ok(DualValue {
        value: formula,
        quadrature,
        gap,
    })
}

/// `ψ(z) = ∫_T φ(ζ)/(ζ - z) dζ`: `2πi Σ_{n≥0} c_n z^n` inside the disc and
/// `-2πi Σ_{n<0} c_n z^n` outside.
pub fn cauchy_integral_formula(w: &CoeffSeq, z: Complex64) -> Result<Complex64, CircleError> {
    let r = z.norm();
    if (r - 1.0).abs() < 1e-12 || !r.is_finite() {
        return Err(CircleError::OnCircle(r));
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    Ok(if r < 1.0 {
        two_pi_i * w.filter(|n| n >= 0).eval(z)
    } else {
        -two_pi_i * w.filter(|n| n < 0).eval(z)
    })
}

/// `ψ(z)` by the trapezoid rule in the angle, doubling the node count until
/// two successive sums agree. The integrand is periodic and analytic, so the
/// rule converges geometrically with ratio `min(|z|, 1/|z|)`.
pub fn cauchy_integral_quadrature(w: &CoeffSeq, z: Complex64, tol: f64) -> Result<Complex64, CircleError> {
    let r = z.norm();
    if (r - 1.0).abs() < 1e-12 || !r.is_finite() {
        return Err(CircleError::OnCircle(r));
    }
    let integrand = |theta: f64| {
        let zeta = Complex64::from_polar(1.0, theta);
        w.eval(zeta) * Complex64::i() * zeta / (zeta - z)
    };
    let trapezoid = |n: usize| -> Complex64 {
        let h = 2.0 * PI / n as f64;
        (0..n).map(|j| integrand(j as f64 * h)).sum::<Complex64>() * h
    };
    let mut n = 2 * (w.degree() as usize + 2);
    let mut prev = trapezoid(n);
    while n < 1 << 24 {
        n *= 2;
        let cur = trapezoid(n);
        if (cur - prev).norm() <= 0.1 * tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(CircleError::NonConvergence(format!("trapezoid sums did not settle for |z| = {r}")))
}

pub fn cauchy_integral_disc(w: &CoeffSeq, z: Complex64, tol: f64) -> Result<DualValue, CircleError> {
    let formula = cauchy_integral_formula(w, z)?;
    let quad = cauchy_integral_quadrature(w, z, tol)?;
    cross_check(formula, quad, tol)
}

fn check_on_circle(z: Complex64) -> Result<(), CircleError> {
    let r = z.norm();
    if (r - 1.0).abs() > 1e-12 {
        return Err(CircleError::OffCircle(r));
    }
    Ok(())
}

/// `i Σ η_n c_n z^n` with `η_n = 1` for `n ≥ 0` and `-1` for `n < 0`.
pub fn pv_circle_formula(w: &CoeffSeq, z: Complex64) -> Result<Complex64, CircleError> {
    check_on_circle(z)?;
    let s: Complex64 = w
        .iter()
        .map(|(n, c)| {
            let eta = if n >= 0 { 1.0 } else { -1.0 };
            c * z.powi(n as i32) * eta
        })
        .sum();
    Ok(Complex64::i() * s)
}

/// `PV (1/π)∫_T φ(ζ)/(ζ - z) dζ` as the limit over arcs `|θ - θ_0| > ε_j`,
/// `ε_j = 2^{-j}π/64`. With `ζ = z e^{is}` the kernel is
/// `dζ/(ζ - z) = (½cot(s/2) + i/2) ds`; pairing `±s` cancels the pole.
pub fn pv_circle_quadrature(w: &CoeffSeq, z: Complex64, tol: f64) -> Result<PVResult, CircleError> {
    check_on_circle(z)?;
    let theta0 = z.arg();
    let phi = |s: f64| eval_on_circle(w, theta0 + s);
    let paired = |s: f64| {
        let (p, m) = (phi(s), phi(-s));
        (p - m) * (0.5 / (0.5 * s).tan()) + (p + m) * Complex64::new(0.0, 0.5)
    };
    let cfg = QuadConfig::new(0.01 * tol);
    let rule = WindowRule {
        max_windows: 60,
        ..WindowRule::default()
    };
    let mut tracker = LimitTracker::new(tol, rule);
    let mut eps = PI / 64.0;
    let outer = integrate_adaptive(&paired, eps, PI, &cfg);
    let mut evaluations = outer.evaluations;
    let mut acc = outer.value;
    let mut err = outer.abs_error_estimate;
    loop {
        match tracker.push(acc / PI) {
            Step::Continue => {}
            Step::Converged => {
                let (v, e) = tracker.estimate();
                return Ok(PVResult::ok(v, e + err / PI, evaluations));
            }
            Step::Diverged(hint) => return Err(CircleError::NonConvergence(format!("ε-limit on the circle: {hint}"))),
        }
        let r = integrate_adaptive(&paired, 0.5 * eps, eps, &cfg);
        evaluations += r.evaluations;
        acc += r.value;
        err += r.abs_error_estimate;
        eps *= 0.5;
    }
}

pub fn pv_circle(w: &CoeffSeq, z: Complex64, tol: f64) -> Result<DualValue, CircleError> {
    let formula = pv_circle_formula(w, z)?;
    let quad = pv_circle_quadrature(w, z, tol)?;
    cross_check(formula, quad.value, tol)
}

/// `(Hw)_n = -i·sign(n)·c_n`, `(Hw)_0 = 0`. Multiplication by `∓i` is done
/// by swapping parts, so it is exact in floating point.
pub fn hilbert_circle(w: &CoeffSeq) -> CoeffSeq {
    w.map(|n, c| match n.signum() {
        1 => Complex64::new(c.im, -c.re),
        -1 => Complex64::new(-c.im, c.re),
        _ => Complex64::new(0.0, 0.0),
    })
}

/// `(Hw)(x) = PV (1/2π)∫_0^{2π} cot((x - y)/2) w(y) dy`, paired as
/// `-(1/2π)∫_0^π cot(s/2)(w(x+s) - w(x-s)) ds`.
pub fn hilbert_circle_quadrature(w: &CoeffSeq, x: f64, tol: f64) -> PVResult {
    let g = |s: f64| (eval_on_circle(w, x + s) - eval_on_circle(w, x - s)) / (0.5 * s).tan();
    let mut r = integrate_adaptive(&g, 0.0, PI, &QuadConfig::new(tol));
    r.value *= -1.0 / (2.0 * PI);
    r.abs_error_estimate /= 2.0 * PI;
    r
}

/// Split `w ∈ W_0` into its analytic part (`n > 0`, eigenvalue `-i`) and
/// anti-analytic part (`n < 0`, eigenvalue `+i`).
pub fn eigen_decompose(w: &CoeffSeq) -> Result<(CoeffSeq, CoeffSeq), CircleError> {
    if !w.in_w0() {
        return Err(CircleError::NonZeroMean(w.get(0)));
    }
    let mut pos = w.filter(|n| n > 0);
    let mut neg = w.filter(|n| n < 0);
    pos.tail_bound = w.tail_bound;
    neg.tail_bound = w.tail_bound;
    Ok((pos, neg))
}
