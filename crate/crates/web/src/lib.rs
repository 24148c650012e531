//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function samples a curve on a uniform grid and returns a
//! flat `Float64Array` of rows; points where quadrature fails hold `NaN` so
//! the plot shows a gap instead of a wrong value. The plain-Rust functions
//! behind the bindings are what the tests exercise.

use std::f64::consts::PI;

use krein_core::circle::{eval_on_circle, hilbert_circle, wiener_norm, CoeffSeq};
use krein_core::expr::Expression;
use krein_core::measure::Measure;
use krein_core::quad::QuadConfig;
use krein_core::transforms::{hilbert_generalized_pv, BochnerTransform};
use wasm_bindgen::prelude::*;

/// Grid sizes are capped so a slider cannot freeze the tab.
pub const MAX_POINTS: usize = 2000;

fn grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(format!("need finite lo < hi, got [{lo}, {hi}]"));
    }
    if !(2..=MAX_POINTS).contains(&n) {
        return Err(format!("number of points must be in 2..={MAX_POINTS}, got {n}"));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn tolerance(tol: f64) -> Result<QuadConfig, String> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(format!("tolerance must be > 0, got {tol}"));
    }
    // Interactive use: a tenth of the command-line default budget.
    Ok(QuadConfig::new(tol).with_budget(100_000))
}

/// Rows `[x, Re μ̂(k, x), Im μ̂(k, x)]` of the order-`k` Bochner transform
/// (`k = 0` is the Fourier transform) of the measure in `measure_json`.
pub fn transform_rows(measure_json: &str, k: u32, lo: f64, hi: f64, n: usize, tol: f64) -> Result<Vec<f64>, String> {
    let xs = grid(lo, hi, n)?;
    let cfg = tolerance(tol)?;
    let mu = Measure::from_json(measure_json).map_err(|e| e.to_string())?;
    let table = BochnerTransform::new(&mu, k, &cfg).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(3 * n);
    for x in xs {
        let v = table.eval(x).unwrap_or(num_complex::Complex64::new(f64::NAN, f64::NAN));
        out.extend([x, v.re, v.im]);
    }
    Ok(out)
}

/// Rows `[x, f(x), (hf)(x)]` with `h` the generalized Hilbert transform.
pub fn hilbert_rows(expr: &str, lo: f64, hi: f64, n: usize, tol: f64) -> Result<Vec<f64>, String> {
    let xs = grid(lo, hi, n)?;
    let cfg = tolerance(tol)?;
    let e = Expression::parse(expr).map_err(|e| e.to_string())?;
    let f = |t: f64| e.eval_or_nan(t);
    let mut out = Vec::with_capacity(3 * n);
    for x in xs {
        let r = hilbert_generalized_pv(&f, x, &cfg);
        out.extend([x, f(x), if r.converged { r.value.re } else { f64::NAN }]);
    }
    Ok(out)
}

/// Rows `[x, Re φ, Im φ, Re Hφ, Im Hφ]` on `[0, 2π]` for the trigonometric
/// polynomial in `coeffs_json`, followed by the two Wiener norms `‖φ‖, ‖Hφ‖`.
pub fn circle_rows(coeffs_json: &str, n: usize) -> Result<Vec<f64>, String> {
    let xs = grid(0.0, 2.0 * PI, n)?;
    let w = CoeffSeq::from_json(coeffs_json).map_err(|e| e.to_string())?;
    let hw = hilbert_circle(&w);
    let mut out = Vec::with_capacity(5 * n + 2);
    for x in xs {
        let (a, b) = (eval_on_circle(&w, x), eval_on_circle(&hw, x));
        out.extend([x, a.re, a.im, b.re, b.im]);
    }
    out.extend([wiener_norm(&w), wiener_norm(&hw)]);
    Ok(out)
}

fn js(r: Result<Vec<f64>, String>) -> Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = transformCurve)]
pub fn transform_curve(measure_json: &str, k: u32, lo: f64, hi: f64, n: usize, tol: f64) -> Result<Vec<f64>, JsError> {
    js(transform_rows(measure_json, k, lo, hi, n, tol))
}

#[wasm_bindgen(js_name = hilbertCurve)]
pub fn hilbert_curve(expr: &str, lo: f64, hi: f64, n: usize, tol: f64) -> Result<Vec<f64>, JsError> {
    js(hilbert_rows(expr, lo, hi, n, tol))
}

#[wasm_bindgen(js_name = circleCurve)]
pub fn circle_curve(coeffs_json: &str, n: usize) -> Result<Vec<f64>, JsError> {
    js(circle_rows(coeffs_json, n))
}
