//! Quadrature engine.
//!
//! Everything here integrates complex-valued integrands of one real variable.
//! Integrals over unbounded ranges and toward singular endpoints are computed
//! as limits of a geometric sequence of windows, stabilized with Wynn's
//! epsilon algorithm ([`limits`]). Oscillatory tails are summed as alternating
//! series of half-period integrals ([`integrate_oscillatory`]). Principal
//! values pair symmetric panels around the singularity so the odd part of the
//! pole cancels before any quadrature rule sees it ([`pv_point`],
//! [`pv_double_limit`]).
//!
//! All routines are deterministic: given the same integrand, tolerance and
//! budget they perform the same evaluations and sum in the same order.

mod adaptive;
pub mod limits;
mod improper;
mod oscillatory;
mod pv;
mod residue;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

pub use adaptive::integrate_adaptive;
pub use improper::{integrate_improper, integrate_toward_endpoint, Side};
pub use limits::{LimitTracker, Step, WindowRule};
pub use oscillatory::{integrate_oscillatory, OscKind};
pub use pv::{pv_double_limit, pv_double_limit_with_windows, pv_point, taper, PV_N0};
pub use residue::{residue_oracle, ResidueError};

pub(crate) use improper::{half_line_with_windows, run_windows, toward_endpoint_with_windows};

/// Default absolute tolerance for finite integrals.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Default absolute tolerance for principal-value double limits.
pub const DEFAULT_PV_TOL: f64 = 1e-6;
/// Default integrand-evaluation budget per operation.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Cooperative cancellation flag shared with long-running evaluations.
#[derive(Debug, Clone, Default)]
pub struct CancelToken(Arc<AtomicBool>);

impl CancelToken {
    pub fn new() -> Self {
        Self::default()
    }
    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }
    pub fn is_cancelled(&self) -> bool {
        self.0.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone)]
pub struct QuadConfig {
    pub tol: f64,
    pub budget: u64,
    pub cancel: Option<CancelToken>,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            tol: DEFAULT_TOL,
            budget: DEFAULT_BUDGET,
            cancel: None,
        }
    }
}

impl QuadConfig {
    pub fn new(tol: f64) -> Self {
        QuadConfig {
            tol,
            ..Default::default()
        }
    }

    pub fn with_tol(&self, tol: f64) -> Self {
        QuadConfig {
            tol,
            ..self.clone()
        }
    }

    pub fn with_budget(&self, budget: u64) -> Self {
        QuadConfig {
            budget,
            ..self.clone()
        }
    }

    pub fn with_cancel(&self, token: CancelToken) -> Self {
        QuadConfig {
            cancel: Some(token),
            ..self.clone()
        }
    }

    pub fn cancelled(&self) -> bool {
        self.cancel.as_ref().is_some_and(|c| c.is_cancelled())
    }

    /// The same settings with `used` evaluations already spent.
    pub(crate) fn remaining(&self, used: u64) -> QuadConfig {
        self.with_budget(self.budget.saturating_sub(used))
    }
}

/// Value of an integral together with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PVResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
    /// Empty when converged; otherwise names the limit or check that failed.
    pub divergence_hint: String,
}

impl PVResult {
    pub fn ok(value: Complex64, abs_error_estimate: f64, evaluations: u64) -> Self {
        PVResult {
            value,
            abs_error_estimate: abs_error_estimate.max(0.0),
            evaluations,
            converged: true,
            divergence_hint: String::new(),
        }
    }

    pub fn failed(hint: &str, evaluations: u64) -> Self {
        PVResult {
            value: Complex64::new(f64::NAN, f64::NAN),
            abs_error_estimate: f64::INFINITY,
            evaluations,
            converged: false,
            divergence_hint: if hint.is_empty() { "failed".into() } else { hint.into() },
        }
    }

    /// Mark as failed, keeping the partial value.
    pub(crate) fn fail_with(mut self, hint: impl Into<String>) -> Self {
        self.converged = false;
        self.divergence_hint = hint.into();
        if self.divergence_hint.is_empty() {
            self.divergence_hint = "failed".into();
        }
        self
    }

    /// True when the window heuristic positively detected divergence, as
    /// opposed to running out of budget or windows.
    pub fn diverged(&self) -> bool {
        !self.converged && self.divergence_hint.contains(limits::NON_DECAY)
    }

    /// Sum of two results: values and errors add, convergence requires both.
    pub(crate) fn combine(self, other: PVResult) -> PVResult {
        let converged = self.converged && other.converged;
        let hint = match (self.converged, other.converged) {
            (true, true) => String::new(),
            (false, true) => self.divergence_hint.clone(),
            (true, false) => other.divergence_hint.clone(),
            (false, false) => format!("{}; {}", self.divergence_hint, other.divergence_hint),
        };
        PVResult {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged,
            divergence_hint: hint,
        }
    }
}
