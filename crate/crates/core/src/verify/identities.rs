//! Identities between transforms: the Carleman and Povzner representations,
//! the Hilbert transform of a Fourier transform, and the generalized Hilbert
//! transform applied twice.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{real_fn, record_limit, Conv, FirstError, Verdict, TOL_CONST};
use crate::expr::Expression;
use crate::measure::Measure;
use crate::quad::{integrate_improper, pv_double_limit_with_windows, QuadConfig};
use crate::transforms::{carleman, hilbert_generalized_pv, BochnerTransform};

/// Transforms are tabulated this much tighter than the verdict tolerance,
/// and PV limits are taken at `PV_SHARE` of it.
const TABLE_SHARE: f64 = 0.01;
const PV_SHARE: f64 = 0.1;
/// Absolute tolerance of the inner Hilbert transform in E1 for `|t| <= 1`.
const INNER_TOL: f64 = 1e-9;

fn factorial(k: u32) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `(i k!/√(2π)) PV∫ μ̂(k, λ)/(λ + z)^{k+1} dλ`, symmetric at infinity.
fn povzner_lhs(v: &mut Verdict, mu: &Measure, k: u32, z: Complex64, cfg: &QuadConfig) -> Result<Complex64, String> {
    let ft = BochnerTransform::new(mu, k, &cfg.with_tol(cfg.tol * TABLE_SHARE)).map_err(|e| e.to_string())?;
    let errors = FirstError::default();
    let f = |l: f64| errors.wrap(ft.eval(l)) / (l + z).powu(k + 1);
    let (r, partials) = pv_double_limit_with_windows(&f, None, &cfg.with_tol(cfg.tol * PV_SHARE));
    if let Some(why) = errors.take() {
        return Err(format!("transform evaluation: {why}"));
    }
    let label = format!("PV ∫ μ̂({k}, λ)/(λ + z)^{} dλ", k + 1);
    if record_limit(v, &label, &r, partials) != Conv::Converges {
        return Err(format!("{label} did not converge: {}", r.divergence_hint));
    }
    let factor = Complex64::i() * factorial(k) / (2.0 * PI).sqrt();
    Ok(factor * r.value)
}

fn representation(name: &str, mu: &Measure, k: u32, z: Complex64, cfg: &QuadConfig) -> Verdict {
    let mut v = Verdict::new(name);
    if !(z.im != 0.0 && z.re.is_finite() && z.im.is_finite()) {
        return v.inconclusive("Im z must be nonzero and finite");
    }
    let lhs = match povzner_lhs(&mut v, mu, k, z, cfg) {
        Ok(l) => l,
        Err(why) => return v.inconclusive(why),
    };
    let rhs = match carleman(mu, z, &cfg.with_tol(cfg.tol * TABLE_SHARE)) {
        Ok(r) => r.value,
        Err(e) => return v.inconclusive(format!("Carleman side: {e}")),
    };
    let ok = v.sides(lhs, rhs, cfg.tol);
    v.decide(ok)
}

/// `(i/√(2π)) PV∫ μ̂(λ)/(λ + z) dλ = F(z)` for `Im z ≠ 0`.
pub fn carleman_identity(mu: &Measure, z: Complex64, cfg: &QuadConfig) -> Verdict {
    representation("carleman", mu, 0, z, cfg)
}

/// Only the existence of the PV limit in [`carleman_identity`]: passed iff
/// the symmetric limit at infinity converged.
pub fn carleman_convergence(mu: &Measure, z: Complex64, cfg: &QuadConfig) -> Verdict {
    let mut v = Verdict::new("carleman-convergence");
    if !(z.im != 0.0 && z.re.is_finite() && z.im.is_finite()) {
        return v.inconclusive("Im z must be nonzero and finite");
    }
    match povzner_lhs(&mut v, mu, 0, z, cfg) {
        Ok(l) => {
            v.lhs = Some(l);
            v.decide(true)
        }
        Err(why) => {
            v.note(why);
            v.decide(false)
        }
    }
}

/// `(i k!/√(2π)) PV∫ μ̂(k, λ)/(λ + z)^{k+1} dλ = F(z)` for `μ ∈ M_k`.
pub fn povzner(mu: &Measure, k: u32, z: Complex64, cfg: &QuadConfig) -> Verdict {
    representation("povzner", mu, k, z, cfg)
}

/// `(1/π) PV∫ μ̂(λ)/(λ - x) dλ = -i ν̂(x)` with `dν = sign(t) dμ`.
pub fn hilbert_identity(mu: &Measure, x: f64, cfg: &QuadConfig) -> Verdict {
    let mut v = Verdict::new("hilbert");
    if !x.is_finite() {
        return v.inconclusive("x must be finite");
    }
    let tcfg = cfg.with_tol(cfg.tol * TABLE_SHARE);
    let (ft, ft_nu) = match (BochnerTransform::new(mu, 0, &tcfg), BochnerTransform::new(&mu.sign_weight(), 0, &tcfg)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return v.inconclusive(e.to_string()),
    };
    let errors = FirstError::default();
    let f = |l: f64| errors.wrap(ft.eval(l)) / (l - x);
    let (r, partials) = pv_double_limit_with_windows(&f, Some(x), &cfg.with_tol(cfg.tol * PV_SHARE));
    if let Some(why) = errors.take() {
        return v.inconclusive(format!("transform evaluation: {why}"));
    }
    if record_limit(&mut v, "PV ∫ μ̂(λ)/(λ - x) dλ", &r, partials) != Conv::Converges {
        return v.inconclusive(format!("PV limit did not converge: {}", r.divergence_hint));
    }
    let rhs = match ft_nu.eval(x) {
        Ok(n) => -Complex64::i() * n,
        Err(e) => return v.inconclusive(e.to_string()),
    };
    let ok = v.sides(r.value / PI, rhs, cfg.tol);
    v.decide(ok)
}

/// `h²f + f` at the sample points, with `h` the generalized Hilbert
/// transform. Both applications are principal-value quadratures; the inner
/// one is evaluated at every node of the outer. The outer kernel decays like
/// `|x|/t²`, so the inner absolute tolerance may grow like `|t|` without
/// spoiling the outer integral. Passed iff the values agree
/// within [`TOL_CONST`]; their mean is reported as `lhs` (the constant `C`).
pub fn hilbert_involution_e1(f_expr: &Expression, points: &[f64], cfg: &QuadConfig) -> Verdict {
    let mut v = Verdict::new("E1");
    if points.is_empty() || points.iter().any(|x| !x.is_finite()) {
        return v.inconclusive("need at least one finite sample point");
    }
    let f = real_fn(f_expr);
    let weight = |t: f64| Complex64::new(f(t).powi(2) / (1.0 + t * t), 0.0);
    let hyp = integrate_improper(&weight, f64::NEG_INFINITY, f64::INFINITY, &cfg.with_tol(1e-8));
    if !hyp.converged {
        return v.inconclusive(format!("hypothesis: ∫ |f|²/(1 + x²) dx: {}", hyp.divergence_hint));
    }
    v.evidence("∫ |f|²/(1 + x²) dx", hyp.value.re, f64::INFINITY);

    let outer_cfg = cfg.with_tol(1e-6);
    let errors = FirstError::default();
    let hf = |t: f64| {
        let r = hilbert_generalized_pv(&f, t, &cfg.with_tol(INNER_TOL * t.abs().max(1.0)));
        errors.wrap(if r.converged { Ok(r.value.re) } else { Err(r.divergence_hint) })
    };
    let mut values = Vec::with_capacity(points.len());
    for &x in points {
        let r = hilbert_generalized_pv(&hf, x, &outer_cfg);
        if let Some(why) = errors.take() {
            return v.inconclusive(format!("inner transform at a node: {why}"));
        }
        if !r.converged {
            return v.inconclusive(format!("outer transform at x = {x}: {}", r.divergence_hint));
        }
        let val = r.value.re + f(x);
        v.evidence(format!("h²f + f at x = {x}"), val, f64::INFINITY);
        values.push(val);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let spread = hi - lo;
    v.evidence("spread of h²f + f", spread, TOL_CONST);
    v.lhs = Some(Complex64::new(mean, 0.0));
    v.note(format!("C = {mean:.10}"));
    v.decide(spread <= TOL_CONST)
}
