//! Limits of window sequences.
//!
//! A [`LimitTracker`] receives partial integrals `S_0, S_1, ...` over a
//! geometric sequence of windows and decides when the limit has been reached,
//! or when the increments fail to shrink and the integral should be reported
//! divergent.
//!
//! Convergence: the Wynn-epsilon estimate (or the raw partial sum, when its
//! geometric tail bound is already below tolerance) is stable to `tol`, and
//! the most recent increment passes the decay test.
//!
//! Divergence: `confirmations` consecutive increments with
//! `|d_j| > decay_ratio * |d_{j-1}|` that are not negligible.

use num_complex::Complex64;

/// Parameters of the window-doubling convergence heuristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowRule {
    /// Increments must shrink at least by this factor per window.
    pub decay_ratio: f64,
    /// Consecutive failures of the decay test that signal divergence.
    pub confirmations: usize,
    /// No verdict before this many windows.
    pub min_windows: usize,
    /// Hard cap on the number of windows.
    pub max_windows: usize,
}

impl Default for WindowRule {
    fn default() -> Self {
        WindowRule {
            decay_ratio: 0.75,
            confirmations: 4,
            min_windows: 4,
            max_windows: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Continue,
    Converged,
    Diverged(String),
}

#[derive(Debug, Clone)]
pub struct LimitTracker {
    rule: WindowRule,
    tol: f64,
    partials: Vec<Complex64>,
    estimates: Vec<Complex64>,
    failures: usize,
    last_ok: bool,
    best: Complex64,
    best_err: f64,
}

/// Phrase in every hint issued by the decay test.
pub const NON_DECAY: &str = "increments did not shrink";

// Wynn epsilon is applied to at most this many trailing partial sums.
const WYNN_DEPTH: usize = 16;

impl LimitTracker {
    pub fn new(tol: f64, rule: WindowRule) -> Self {
        LimitTracker {
            rule,
            tol,
            partials: Vec::new(),
            estimates: Vec::new(),
            failures: 0,
            last_ok: true,
            best: Complex64::new(f64::NAN, f64::NAN),
            best_err: f64::INFINITY,
        }
    }

    pub fn partials(&self) -> &[Complex64] {
        &self.partials
    }

    pub fn len(&self) -> usize {
        self.partials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partials.is_empty()
    }

    /// Current best estimate of the limit and its error.
    pub fn estimate(&self) -> (Complex64, f64) {
        (self.best, self.best_err)
    }

    fn negligible(&self, d: f64, scale: f64) -> bool {
        d <= (1e-3 * self.tol).max(1e-15 * scale)
    }

    pub fn push(&mut self, partial: Complex64) -> Step {
        self.partials.push(partial);
        let n = self.partials.len();
        let start = n.saturating_sub(WYNN_DEPTH);
        let est = wynn_epsilon(&self.partials[start..]);
        self.estimates.push(est);
        if n == 1 {
            self.best = partial;
            return Step::Continue;
        }
        let d = (self.partials[n - 1] - self.partials[n - 2]).norm();
        let scale = partial.norm();
        let ok = if self.negligible(d, scale) {
            true
        } else if n >= 3 {
            let dp = (self.partials[n - 2] - self.partials[n - 3]).norm();
            d <= self.rule.decay_ratio * dp
        } else {
            true
        };
        self.last_ok = ok;
        // The first increment has no predecessor; failures count from n = 3.
        if n >= 3 {
            if ok {
                self.failures = 0;
            } else {
                self.failures += 1;
            }
        }

        // Candidate 1: raw partial sum with its geometric tail bound.
        let q = self.rule.decay_ratio;
        let raw_err = if self.negligible(d, scale) { d } else { d * q / (1.0 - q) };
        // Candidate 2: extrapolated value, judged by its own stability.
        let wynn_err = if n >= 3 {
            let e = &self.estimates;
            (est - e[n - 2]).norm() + (est - e[n - 3]).norm()
        } else {
            f64::INFINITY
        };
        let (value, err) = if ok && raw_err <= wynn_err { (partial, raw_err) } else { (est, wynn_err) };
        let round = 8.0 * f64::EPSILON * scale;
        self.best = value;
        self.best_err = err.max(round);

        if self.failures >= self.rule.confirmations {
            return Step::Diverged(format!(
                "{NON_DECAY} by factor {:.3} for {} consecutive windows",
                1.0 / self.rule.decay_ratio,
                self.rule.confirmations
            ));
        }
        if n >= self.rule.min_windows && ok && self.best_err <= self.tol {
            return Step::Converged;
        }
        if n >= self.rule.max_windows {
            return Step::Diverged(format!("window limit ({}) reached before tolerance", self.rule.max_windows));
        }
        Step::Continue
    }
}

/// Wynn's epsilon algorithm: the last entry of the highest even column that
/// can be formed from `s`. Columns stop when a difference vanishes to
/// rounding, in which case the previous column is already converged.
pub fn wynn_epsilon(s: &[Complex64]) -> Complex64 {
    let n = s.len();
    let zero = Complex64::new(0.0, 0.0);
    if n == 0 {
        return zero;
    }
    let mut best = s[n - 1];
    let mut prev: Vec<Complex64> = vec![zero; n + 1];
    let mut cur: Vec<Complex64> = s.to_vec();
    let mut k = 0usize;
    while cur.len() >= 2 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            let size = cur[i + 1].norm().max(cur[i].norm());
            if diff.norm() <= 16.0 * f64::EPSILON * size || diff.norm() < 1e-300 {
                if k % 2 == 0 {
                    return cur[cur.len() - 1];
                }
                return best;
            }
            next.push(prev[i + 1] + diff.inv());
        }
        k += 1;
        if next.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return best;
        }
        if k % 2 == 0 {
            best = next[next.len() - 1];
        }
        prev = cur;
        cur = next;
    }
    best
}
