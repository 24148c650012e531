//! Piecewise Legendre tables for Fourier integrals of densities.
//!
//! A function `g` on a union of finite segments is fitted panel by panel with
//! degree-15 Legendre series (16-point Gauss–Legendre sampling, bisection
//! until the trailing coefficients are below tolerance). Then, for any `λ`,
//!
//! `∫ g(x) e^{-iλx} dx = Σ_panels h·e^{-iλc} Σ_m a_m·2(-i)^m j_m(λh)`
//!
//! with `j_m` the spherical Bessel functions. The fit error bounds the
//! integral error uniformly in `λ`, so tables are built once and evaluated at
//! arbitrarily large frequencies.

use std::sync::OnceLock;

use num_complex::Complex64;

pub const NP: usize = 16;

/// 16-point Gauss–Legendre rule on `[-1, 1]` with `P_m` at the nodes.
pub struct GaussLegendre {
    pub nodes: [f64; NP],
    pub weights: [f64; NP],
    /// `pm[m][i] = P_m(nodes[i])`.
    pub pm: [[f64; NP]; NP],
}

/// `P_0(s), ..., P_{n-1}(s)`.
pub fn legendre_values(s: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = 1.0;
    if n > 1 {
        out[1] = s;
    }
    for m in 1..n.saturating_sub(1) {
        let mf = m as f64;
        out[m + 1] = ((2.0 * mf + 1.0) * s * out[m] - mf * out[m - 1]) / (mf + 1.0);
    }
}

pub fn gauss_legendre() -> &'static GaussLegendre {
    static GL: OnceLock<GaussLegendre> = OnceLock::new();
    GL.get_or_init(|| {
        let n = NP;
        let mut nodes = [0.0; NP];
        let mut weights = [0.0; NP];
        for i in 0..n {
            // Newton on P_n from the Chebyshev-like initial guess.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let mut p = [0.0; NP + 1];
                legendre_values(x, &mut p);
                let pn = p[n];
                let dp = n as f64 * (x * pn - p[n - 1]) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let mut p = [0.0; NP + 1];
            legendre_values(x, &mut p);
            let dp = n as f64 * (x * p[n] - p[n - 1]) / (x * x - 1.0);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        // Ascending order.
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| nodes[a].total_cmp(&nodes[b]));
        let nodes_sorted: [f64; NP] = std::array::from_fn(|k| nodes[idx[k]]);
        let weights_sorted: [f64; NP] = std::array::from_fn(|k| weights[idx[k]]);
        let mut pm = [[0.0; NP]; NP];
        for (i, &x) in nodes_sorted.iter().enumerate() {
            let mut p = [0.0; NP];
            legendre_values(x, &mut p);
            for m in 0..NP {
                pm[m][i] = p[m];
            }
        }
        GaussLegendre {
            nodes: nodes_sorted,
            weights: weights_sorted,
            pm,
        }
    })
}

/// Spherical Bessel functions `j_0(ω), ..., j_{15}(ω)`.
pub fn spherical_bessel(omega: f64, out: &mut [f64; NP]) {
    let w = omega.abs();
    if w < 0.5 {
        series(w, out);
    } else if w >= NP as f64 {
        let (s, c) = w.sin_cos();
        out[0] = s / w;
        out[1] = s / (w * w) - c / w;
        for m in 1..NP - 1 {
            out[m + 1] = (2.0 * m as f64 + 1.0) / w * out[m] - out[m - 1];
        }
    } else {
        miller(w, out);
    }
    if omega < 0.0 {
        for (m, v) in out.iter_mut().enumerate() {
            if m % 2 == 1 {
                *v = -*v;
            }
        }
    }
}

fn series(w: f64, out: &mut [f64; NP]) {
    let x2 = -0.5 * w * w;
    let mut lead = 1.0; // w^m / (2m+1)!!
    for (m, o) in out.iter_mut().enumerate() {
        if m > 0 {
            lead *= w / (2.0 * m as f64 + 1.0);
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..40 {
            term *= x2 / (k as f64 * (2.0 * (m + k) as f64 + 1.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        *o = lead * sum;
    }
}

fn miller(w: f64, out: &mut [f64; NP]) {
    let start = NP + 24 + w.ceil() as usize;
    let mut vals = vec![0.0f64; start + 2];
    vals[start] = 1e-30;
    for m in (1..=start).rev() {
        vals[m - 1] = (2.0 * m as f64 + 1.0) / w * vals[m] - vals[m + 1];
        if vals[m - 1].abs() > 1e200 {
            for v in vals.iter_mut() {
                *v *= 1e-200;
            }
        }
    }
    // Σ (2m+1) j_m² = 1 fixes the scale; j_0 = sin ω/ω or j_1 fixes the sign.
    let norm: f64 = vals.iter().enumerate().map(|(m, v)| (2.0 * m as f64 + 1.0) * v * v).sum::<f64>().sqrt();
    let (s, c) = w.sin_cos();
    let j0 = s / w;
    let j1 = s / (w * w) - c / w;
    let sign = if j0.abs() > j1.abs() { j0 * vals[0] } else { j1 * vals[1] };
    let scale = if sign < 0.0 { -1.0 / norm } else { 1.0 / norm };
    for m in 0..NP {
        out[m] = vals[m] * scale;
    }
}

/// `∫_{-1}^{1} P_m(s) e^{-iωs} ds = 2(-i)^m j_m(ω)` for `m < 16`.
pub fn legendre_exp_integrals(omega: f64, out: &mut [Complex64; NP]) {
    let mut j = [0.0; NP];
    spherical_bessel(omega, &mut j);
    let phases = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, -1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 1.0),
    ];
    for m in 0..NP {
        out[m] = phases[m % 4] * (2.0 * j[m]);
    }
}

/// A finite segment to tabulate, tagged with a level for partial sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub level: u32,
}

#[derive(Debug, Clone)]
struct TablePanel {
    c: f64,
    h: f64,
    level: u32,
    coef: [Complex64; NP],
    /// `∫ g(x)(-ix)^m dx` over the panel.
    moments: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct LegendreTable {
    panels: Vec<TablePanel>,
    /// Sum over panels of `2h·(estimated sup-norm fit error)`.
    pub fit_error: f64,
    pub evaluations: u64,
}

const MAX_PANELS: usize = 40_000;

impl LegendreTable {
    /// Tabulate `g` on `segments` so that the integrated fit error is about
    /// `tol`. Also precomputes `n_moments` polynomial moments per panel.
    pub fn build(
        g: &dyn Fn(f64) -> Complex64,
        segments: &[Segment],
        n_moments: usize,
        tol: f64,
    ) -> Result<LegendreTable, String> {
        let gl = gauss_legendre();
        let share = tol / segments.len().max(1) as f64;
        let mut accepted: Vec<TablePanel> = Vec::new();
        let mut fit_error = 0.0;
        let mut evaluations = 0u64;
        // (a, b, segment index); each segment gets an equal share of `tol`,
        // spread over its panels in proportion to length.
        let mut stack: Vec<(f64, f64, usize)> = (0..segments.len()).rev().map(|i| (segments[i].a, segments[i].b, i)).collect();
        for s in segments {
            if !(s.a.is_finite() && s.b.is_finite()) || s.a >= s.b {
                return Err(format!("segment [{}, {}] must be finite and non-empty", s.a, s.b));
            }
        }
        while let Some((a, b, seg)) = stack.pop() {
            let level = segments[seg].level;
            let seg_len = segments[seg].b - segments[seg].a;
            if accepted.len() + stack.len() > MAX_PANELS {
                return Err("density needs too many panels to tabulate".into());
            }
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            let mut vals = [Complex64::new(0.0, 0.0); NP];
            let mut scale = 0.0f64;
            for i in 0..NP {
                let v = g(c + h * gl.nodes[i]);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(format!("density not finite at x = {}", c + h * gl.nodes[i]));
                }
                scale = scale.max(v.norm());
                vals[i] = v;
            }
            evaluations += NP as u64;
            let mut coef = [Complex64::new(0.0, 0.0); NP];
            for m in 0..NP {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..NP {
                    s += vals[i] * (gl.weights[i] * gl.pm[m][i]);
                }
                coef[m] = s * (0.5 * (2.0 * m as f64 + 1.0));
            }
            let tail = 2.0 * (coef[NP - 3].norm() + coef[NP - 2].norm() + coef[NP - 1].norm());
            let err = 2.0 * h * tail;
            let allowed = (share * (2.0 * h) / seg_len).max(2.0 * h * 64.0 * f64::EPSILON * scale);
            let splittable = h > 1e-13 * c.abs().max(1e-300) && h > 1e-300;
            if err <= allowed || !splittable {
                let mut moments = vec![Complex64::new(0.0, 0.0); n_moments];
                for i in 0..NP {
                    let x = c + h * gl.nodes[i];
                    let mut p = Complex64::new(1.0, 0.0);
                    for mo in moments.iter_mut() {
                        *mo += vals[i] * p * (gl.weights[i] * h);
                        p *= Complex64::new(0.0, -x);
                    }
                }
                fit_error += err;
                accepted.push(TablePanel { c, h, level, coef, moments });
            } else {
                stack.push((c, b, seg));
                stack.push((a, c, seg));
            }
        }
        accepted.sort_by(|p, q| p.c.total_cmp(&q.c));
        Ok(LegendreTable {
            panels: accepted,
            fit_error,
            evaluations,
        })
    }

    pub fn len(&self) -> usize {
        self.panels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    /// `∫ g(x) e^{-iλx} dx` over panels with `level < max_level`.
    pub fn fourier(&self, lambda: f64, max_level: u32) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        let mut ints = [Complex64::new(0.0, 0.0); NP];
        let mut last_h = f64::NAN;
        for p in self.panels.iter().filter(|p| p.level < max_level) {
            if p.h != last_h {
                legendre_exp_integrals(lambda * p.h, &mut ints);
                last_h = p.h;
            }
            let mut s = Complex64::new(0.0, 0.0);
            for m in 0..NP {
                s += p.coef[m] * ints[m];
            }
            total += s * Complex64::new(0.0, -lambda * p.c).exp() * p.h;
        }
        total
    }

    /// `∫ g(x)(-ix)^m dx` over panels with `level < max_level`.
    pub fn moment(&self, m: usize, max_level: u32) -> Complex64 {
        self.panels
            .iter()
            .filter(|p| p.level < max_level)
            .map(|p| p.moments[m])
            .sum()
    }
}
