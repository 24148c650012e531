//! Checkers for the identities and membership criteria, each returning a
//! [`Verdict`] that carries the computed sides, the evidence behind the
//! decision and the raw window sequences of every convergence test.
//!
//! Hypotheses that a numeric tool can only sample (monotonicity, convexity,
//! parity, decay at infinity) are checked first; a failed hypothesis makes
//! the verdict inconclusive, never failed.

use std::cell::RefCell;

use num_complex::Complex64;
use serde::Serialize;

use crate::expr::Expression;
use crate::quad::PVResult;

mod identities;
mod membership;
mod positivity;

pub use identities::{carleman_convergence, carleman_identity, hilbert_identity, hilbert_involution_e1, povzner};
pub use membership::{
    ConvexityPartition, c0_iterated_log_example, c0_log_example, c0_negative_example, check_6alpha, check_c0, check_d1, check_d2,
    log_example_breakpoint,
};
pub use positivity::{check_3alpha, check_s1, check_s2, check_s3};

/// Tolerance for the integral identities of the positivity theorems.
pub const TOL_IDENTITY: f64 = 1e-4;
/// Tolerance on the spread of `h²f + f` across sample points.
pub const TOL_CONST: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub label: String,
    #[serde(serialize_with = "finite_or_name")]
    pub value: f64,
    #[serde(serialize_with = "finite_or_name")]
    pub threshold: f64,
}

/// Divergent integrals are recorded as infinite values; JSON has no
/// infinity, so non-finite numbers are written as `"inf"`, `"-inf"`, `"nan"`.
fn finite_or_name<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// Partial sums of a window sequence, in the order they were produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    pub label: String,
    pub partials: Vec<Complex64>,
}

/// Outcome of a checker. `passed` implies `!inconclusive`, and `abs_gap`
/// is `|lhs - rhs|` whenever both sides are present.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub passed: bool,
    pub inconclusive: bool,
    pub lhs: Option<Complex64>,
    pub rhs: Option<Complex64>,
    pub abs_gap: Option<f64>,
    pub evidence: Vec<Evidence>,
    pub traces: Vec<Trace>,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(check: &str) -> Verdict {
        Verdict {
            check: check.to_string(),
            passed: false,
            inconclusive: false,
            lhs: None,
            rhs: None,
            abs_gap: None,
            evidence: Vec::new(),
            traces: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Mark inconclusive; this also clears `passed`.
    pub fn inconclusive(mut self, why: impl Into<String>) -> Verdict {
        self.inconclusive = true;
        self.passed = false;
        self.notes.push(why.into());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn evidence(&mut self, label: impl Into<String>, value: f64, threshold: f64) {
        self.evidence.push(Evidence {
            label: label.into(),
            value,
            threshold,
        });
    }

    pub fn trace(&mut self, label: impl Into<String>, partials: Vec<Complex64>) {
        self.traces.push(Trace {
            label: label.into(),
            partials,
        });
    }

    /// Record both sides and return whether they agree within `tol`.
    pub fn sides(&mut self, lhs: Complex64, rhs: Complex64, tol: f64) -> bool {
        let gap = (lhs - rhs).norm();
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self.abs_gap = Some(gap);
        self.evidence("|lhs - rhs|", gap, tol);
        gap <= tol
    }

    /// Final decision; ignored when the verdict is already inconclusive.
    pub fn decide(mut self, passed: bool) -> Verdict {
        self.passed = passed && !self.inconclusive;
        self
    }

    /// Serialize to pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("verdicts serialize")
    }
}

/// Outcome of a convergence test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Conv {
    Converges,
    Diverges,
    Unknown,
}

/// Record a window-limit result as evidence and trace. The evidence value is
/// the modulus of the limit estimate, or `+∞` when the windows failed.
pub(crate) fn record_limit(v: &mut Verdict, label: &str, r: &PVResult, partials: Vec<Complex64>) -> Conv {
    v.trace(label, partials);
    if r.converged {
        v.evidence(label, r.value.norm(), f64::INFINITY);
        Conv::Converges
    } else {
        v.evidence(label, f64::INFINITY, f64::INFINITY);
        v.note(format!("{label}: {}", r.divergence_hint));
        if r.diverged() {
            Conv::Diverges
        } else {
            Conv::Unknown
        }
    }
}

/// Keeps the first error raised by a closure evaluated inside a
/// quadrature, which itself only sees numbers; the failing point counts as 0.
#[derive(Default)]
pub(crate) struct FirstError(RefCell<Option<String>>);

impl FirstError {
    pub(crate) fn wrap<T: Default, E: ToString>(&self, r: Result<T, E>) -> T {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.borrow_mut().get_or_insert_with(|| e.to_string());
                T::default()
            }
        }
    }

    pub(crate) fn take(&self) -> Option<String> {
        self.0.borrow_mut().take()
    }
}

pub(crate) fn real_fn(e: &Expression) -> impl Fn(f64) -> f64 + '_ {
    move |x| e.eval_or_nan(x)
}

/// `n` points log-spaced over `[lo, hi]`.
pub(crate) fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Rounding allowance for differences of the given values.
pub(crate) fn noise(vals: &[f64]) -> f64 {
    64.0 * f64::EPSILON * vals.iter().map(|v| v.abs()).sum::<f64>() + 1e-300
}

/// `R(x-h) - 2R(x) + R(x+h)` and its rounding allowance.
pub(crate) fn second_difference(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> (f64, f64) {
    let (a, b, c) = (f(x - h), f(x), f(x + h));
    (a - 2.0 * b + c, noise(&[a, 2.0 * b, c]))
}

/// Sampled decay of `|f(dir·10^j)|`, `j = 0, ..., 300`, up to the first
/// non-finite value (intermediate overflow ends the sampling): at least 11
/// samples, and either the last is below `10^{-3}` of the largest or the
/// last 11 decrease strictly. A heuristic; it cannot see a limit like
/// `1 + 1/log x`.
pub(crate) fn tends_to_zero(f: &dyn Fn(f64) -> f64, dir: f64) -> bool {
    let v: Vec<f64> = (0..=300).map(|j| f(dir * 10f64.powi(j)).abs()).take_while(|x| x.is_finite()).collect();
    if v.len() < 11 {
        return false;
    }
    let max = v.iter().cloned().fold(0.0, f64::max);
    let last = v[v.len() - 1];
    last <= 1e-3 * max || v[v.len() - 11..].windows(2).all(|w| w[1] < w[0])
}

/// Sampled hypotheses on `(0, ∞)` for a function `f`: the first failure.
pub(crate) fn half_line_shape(f: &dyn Fn(f64) -> f64, convex: bool) -> Result<(), String> {
    let grid = log_grid(1e-3, 1e3, 129);
    for w in grid.windows(2) {
        let (a, b) = (f(w[0]), f(w[1]));
        if !(a.is_finite() && b.is_finite()) {
            return Err(format!("not finite near x = {}", w[0]));
        }
        if b > a + noise(&[a, b]) {
            return Err(format!("not decreasing: f({}) = {a:e} < f({}) = {b:e}", w[0], w[1]));
        }
    }
    if convex {
        for &x in &grid {
            let (d2, n) = second_difference(f, x, 1e-4 * x);
            if d2 < -n {
                return Err(format!("not convex near x = {x}: second difference {d2:e}"));
            }
        }
    }
    if !tends_to_zero(f, 1.0) {
        return Err("f does not appear to tend to 0 at +∞".into());
    }
    Ok(())
}
