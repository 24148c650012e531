//! Finite complex Borel measures on the line: finitely many atoms plus
//! densities on intervals with pairwise disjoint interiors.
//!
//! Construction checks structure only. Finiteness of the total variation is
//! a numerical question answered by [`Measure::total_variation`] and
//! [`Measure::in_class_mk`]; the latter is meaningful exactly for measures
//! of infinite variation, such as Lebesgue measure in `M_2`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Expression, ParseError};
use crate::quad::{integrate_improper, PVResult, QuadConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("atom location must be finite, got {0}")]
    AtomLocation(f64),
    #[error("atom weight at t = {0} is not finite")]
    AtomWeight(f64),
    #[error("two atoms at t = {0}")]
    DuplicateAtom(f64),
    #[error("piece [{a}, {b}] needs a < b")]
    EmptyPiece { a: f64, b: f64 },
    #[error("pieces [{0}, {1}] and [{2}, {3}] overlap")]
    Overlap(f64, f64, f64, f64),
    #[error("invalid bound {0:?}: expected a number, \"-inf\" or \"inf\"")]
    Bound(String),
    #[error("density expression {field} of piece {index}: {source}")]
    Density {
        index: usize,
        field: &'static str,
        source: ParseError,
    },
    #[error("invalid measure JSON: {0}")]
    Json(String),
    #[error("total variation diverges: {0}")]
    Divergent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub t: f64,
    pub weight: Complex64,
}

/// Density `re(t) + i·im(t)` on `(a, b)`; either bound may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub re: Expression,
    pub im: Expression,
}

impl Piece {
    pub fn new(a: f64, b: f64, re: Expression, im: Expression) -> Piece {
        Piece { a, b, re, im }
    }

    pub fn real(a: f64, b: f64, re: Expression) -> Piece {
        Piece::new(a, b, re, Expression::constant(0.0))
    }

    /// Density value; NaN where an expression is undefined.
    pub fn density(&self, t: f64) -> Complex64 {
        let re = self.re.eval_or_nan(t);
        let im = if self.im.is_zero_constant() { 0.0 } else { self.im.eval_or_nan(t) };
        Complex64::new(re, im)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero_constant()
    }

    fn scaled(&self, c: Complex64) -> Piece {
        Piece {
            a: self.a,
            b: self.b,
            re: self.re.scale(c.re).sub(&self.im.scale(c.im)),
            im: self.im.scale(c.re).add(&self.re.scale(c.im)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Measure {
    atoms: Vec<Atom>,
    pieces: Vec<Piece>,
}

/// `∫ d|μ|(x) / (1 + |x|^k)` and whether it is finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureClassReport {
    pub k: u32,
    pub weighted_variation: f64,
    pub in_class: bool,
    pub diagnostics: String,
}

impl Measure {
    /// Validates and sorts atoms by location and pieces by left endpoint.
    pub fn new(mut atoms: Vec<Atom>, mut pieces: Vec<Piece>) -> Result<Measure, MeasureError> {
        for a in &atoms {
            if !a.t.is_finite() {
                return Err(MeasureError::AtomLocation(a.t));
            }
            if !(a.weight.re.is_finite() && a.weight.im.is_finite()) {
                return Err(MeasureError::AtomWeight(a.t));
            }
        }
        atoms.sort_by(|p, q| p.t.total_cmp(&q.t));
        for w in atoms.windows(2) {
            if w[0].t == w[1].t {
                return Err(MeasureError::DuplicateAtom(w[0].t));
            }
        }
        for p in &pieces {
            if p.a.is_nan() || p.b.is_nan() || !(p.a < p.b) {
                return Err(MeasureError::EmptyPiece { a: p.a, b: p.b });
            }
        }
        pieces.sort_by(|p, q| p.a.total_cmp(&q.a));
        for w in pieces.windows(2) {
            if w[1].a < w[0].b {
                return Err(MeasureError::Overlap(w[0].a, w[0].b, w[1].a, w[1].b));
            }
        }
        Ok(Measure { atoms, pieces })
    }

    pub fn zero() -> Measure {
        Measure::default()
    }

    pub fn dirac(t: f64, weight: Complex64) -> Measure {
        Measure::new(vec![Atom { t, weight }], Vec::new()).expect("finite atom")
    }

    /// Real density given by an expression source on `(a, b)`.
    pub fn density(a: f64, b: f64, re: &str) -> Result<Measure, MeasureError> {
        let e = Expression::parse(re).map_err(|source| MeasureError::Density { index: 0, field: "re", source })?;
        Measure::new(Vec::new(), vec![Piece::real(a, b, e)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty() && self.pieces.is_empty()
    }

    /// True when all weights and densities are real.
    pub fn is_real(&self) -> bool {
        self.atoms.iter().all(|a| a.weight.im == 0.0) && self.pieces.iter().all(Piece::is_real)
    }

    /// Support contained in `[0, ∞)` resp. `(-∞, 0]`, judged structurally.
    pub fn supported_in(&self, lo: f64, hi: f64) -> bool {
        self.atoms.iter().all(|a| a.t >= lo && a.t <= hi) && self.pieces.iter().all(|p| p.a >= lo && p.b <= hi)
    }

    /// `Σ|w_j| + Σ ∫|ρ|`.
    pub fn total_variation(&self, cfg: &QuadConfig) -> Result<f64, MeasureError> {
        let r = self.weighted_variation(|_| 1.0, cfg);
        if r.converged {
            Ok(r.value.re)
        } else {
            Err(MeasureError::Divergent(r.divergence_hint))
        }
    }

    fn weighted_variation(&self, weight: impl Fn(f64) -> f64, cfg: &QuadConfig) -> PVResult {
        let atoms: f64 = self.atoms.iter().map(|a| a.weight.norm() * weight(a.t)).sum();
        let mut out = PVResult::ok(Complex64::new(atoms, 0.0), 0.0, 0);
        let share = cfg.with_tol(cfg.tol / self.pieces.len().max(1) as f64);
        for (i, p) in self.pieces.iter().enumerate() {
            let f = |t: f64| Complex64::new(p.density(t).norm() * weight(t), 0.0);
            let r = piece_integral(&f, p.a, p.b, &share.remaining(out.evaluations));
            let r = if r.converged {
                r
            } else {
                let hint = format!("piece {i} on ({}, {}): {}", p.a, p.b, r.divergence_hint);
                r.fail_with(hint)
            };
            out = out.combine(r);
        }
        out
    }

    /// Weighted variation `∫ d|μ|/(1+|x|^k)` with a convergence verdict.
    pub fn in_class_mk(&self, k: u32, cfg: &QuadConfig) -> MeasureClassReport {
        let r = self.weighted_variation(|x| 1.0 / (1.0 + x.abs().powi(k as i32)), cfg);
        MeasureClassReport {
            k,
            weighted_variation: if r.converged { r.value.re } else { f64::INFINITY },
            in_class: r.converged,
            diagnostics: if r.converged {
                format!("converged, error estimate {:e}, {} evaluations", r.abs_error_estimate, r.evaluations)
            } else {
                r.divergence_hint
            },
        }
    }

    /// `∫ g dμ`: atoms exactly, each piece by improper quadrature.
    pub fn integrate(&self, g: &dyn Fn(f64) -> Complex64, cfg: &QuadConfig) -> PVResult {
        let atoms = self
            .atoms
            .iter()
            .fold(Complex64::new(0.0, 0.0), |s, a| s + g(a.t) * a.weight);
        let mut out = PVResult::ok(atoms, 0.0, 0);
        let share = cfg.with_tol(cfg.tol / self.pieces.len().max(1) as f64);
        for (i, p) in self.pieces.iter().enumerate() {
            let f = |t: f64| g(t) * p.density(t);
            let r = piece_integral(&f, p.a, p.b, &share.remaining(out.evaluations));
            let r = if r.converged {
                r
            } else {
                let hint = format!("piece {i} on ({}, {}): {}", p.a, p.b, r.divergence_hint);
                r.fail_with(hint)
            };
            out = out.combine(r);
        }
        out
    }

    /// `μ^△(E) = μ(-E)`.
    pub fn reflect(&self) -> Measure {
        let atoms = self.atoms.iter().map(|a| Atom { t: -a.t, weight: a.weight }).collect();
        let pieces = self
            .pieces
            .iter()
            .map(|p| Piece::new(-p.b, -p.a, p.re.reflect(), p.im.reflect()))
            .collect();
        Measure::new(atoms, pieces).expect("reflection preserves structure")
    }

    /// `Σ c_i μ_i`, splitting pieces at every endpoint so densities add on overlaps.
    pub fn linear_combination(terms: &[(Complex64, &Measure)]) -> Measure {
        let mut atoms: Vec<Atom> = Vec::new();
        for (c, m) in terms {
            for a in &m.atoms {
                match atoms.iter_mut().find(|b| b.t == a.t) {
                    Some(b) => b.weight += *c * a.weight,
                    None => atoms.push(Atom { t: a.t, weight: *c * a.weight }),
                }
            }
        }
        atoms.retain(|a| a.weight != Complex64::new(0.0, 0.0));

        let mut cuts: Vec<f64> = terms
            .iter()
            .flat_map(|(_, m)| m.pieces.iter().flat_map(|p| [p.a, p.b]))
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut pieces = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mut re = Expression::constant(0.0);
            let mut im = Expression::constant(0.0);
            let mut covered = false;
            for (c, m) in terms {
                for p in &m.pieces {
                    if p.a <= lo && hi <= p.b {
                        let s = p.scaled(*c);
                        re = re.add(&s.re);
                        im = im.add(&s.im);
                        covered = true;
                    }
                }
            }
            if covered && !(re.is_zero_constant() && im.is_zero_constant()) {
                pieces.push(Piece::new(lo, hi, re, im));
            }
        }
        Measure::new(atoms, pieces).expect("combination of valid measures is valid")
    }

    /// `(μ + μ^△)/2`.
    pub fn even_part(&self) -> Measure {
        let r = self.reflect();
        let h = Complex64::new(0.5, 0.0);
        Measure::linear_combination(&[(h, self), (h, &r)])
    }

    /// `(μ - μ^△)/2`.
    pub fn odd_part(&self) -> Measure {
        let r = self.reflect();
        Measure::linear_combination(&[(Complex64::new(0.5, 0.0), self), (Complex64::new(-0.5, 0.0), &r)])
    }

    /// `dν = sign(t) dμ`; the atom at 0 is annihilated.
    pub fn sign_weight(&self) -> Measure {
        let atoms = self
            .atoms
            .iter()
            .filter(|a| a.t != 0.0)
            .map(|a| Atom { t: a.t, weight: if a.t < 0.0 { -a.weight } else { a.weight } })
            .collect();
        let mut pieces = Vec::new();
        for p in &self.pieces {
            if p.a < 0.0 {
                let neg = p.scaled(Complex64::new(-1.0, 0.0));
                pieces.push(Piece::new(p.a, p.b.min(0.0), neg.re, neg.im));
            }
            if p.b > 0.0 {
                pieces.push(Piece::new(p.a.max(0.0), p.b, p.re.clone(), p.im.clone()));
            }
        }
        Measure::new(atoms, pieces).expect("splitting at 0 preserves structure")
    }

    /// Restriction to `[lo, hi]`, keeping atoms on the boundary.
    pub fn restrict(&self, lo: f64, hi: f64) -> Measure {
        let atoms = self.atoms.iter().filter(|a| a.t >= lo && a.t <= hi).copied().collect();
        let pieces = self
            .pieces
            .iter()
            .filter(|p| p.b > lo && p.a < hi)
            .map(|p| Piece::new(p.a.max(lo), p.b.min(hi), p.re.clone(), p.im.clone()))
            .collect();
        Measure::new(atoms, pieces).expect("restriction preserves structure")
    }

    pub fn from_json(text: &str) -> Result<Measure, MeasureError> {
        let spec: MeasureSpec = serde_json::from_str(text).map_err(|e| MeasureError::Json(e.to_string()))?;
        spec.build()
    }

    pub fn to_spec(&self) -> MeasureSpec {
        MeasureSpec {
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomSpec { t: a.t, re: a.weight.re, im: a.weight.im })
                .collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceSpec {
                    a: Bound::from_f64(p.a),
                    b: Bound::from_f64(p.b),
                    re: p.re.to_string(),
                    im: if p.im.is_zero_constant() { None } else { Some(p.im.to_string()) },
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("measure spec serializes")
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for a in &self.atoms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})·δ[{}]", a.weight, a.t)?;
        }
        for p in &self.pieces {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if p.is_real() {
                write!(f, "[{}]·1({}, {})", p.re, p.a, p.b)?;
            } else {
                write!(f, "[{} + i·({})]·1({}, {})", p.re, p.im, p.a, p.b)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Integral over one piece, split at the origin when the piece straddles it:
/// densities such as `exp(-|t|)` have a kink there, and a kink lying between
/// an endpoint and the outermost Kronrod node is invisible to the error
/// estimate.
fn piece_integral(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, cfg: &QuadConfig) -> PVResult {
    if !(a < 0.0 && 0.0 < b) {
        return integrate_improper(f, a, b, cfg);
    }
    let half = cfg.with_tol(0.5 * cfg.tol);
    let left = integrate_improper(f, a, 0.0, &half);
    if !left.converged {
        return left;
    }
    let right = integrate_improper(f, 0.0, b, &half.remaining(left.evaluations));
    left.combine(right)
}

/// `∫ g dμ` at tolerance `cfg.tol`; see [`Measure::integrate`].
pub fn integrate_measure(mu: &Measure, g: &dyn Fn(f64) -> Complex64, cfg: &QuadConfig) -> PVResult {
    mu.integrate(g, cfg)
}

/// JSON form of a measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct MeasureSpec {
    #[serde(default)]
    pub atoms: Vec<AtomSpec>,
    #[serde(default)]
    pub pieces: Vec<PieceSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub t: f64,
    #[serde(default)]
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceSpec {
    pub a: Bound,
    pub b: Bound,
    pub re: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<String>,
}

/// An interval endpoint: a number or `"-inf"` / `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Finite(f64),
    Named(String),
}

impl Bound {
    pub fn from_f64(v: f64) -> Bound {
        if v == f64::INFINITY {
            Bound::Named("inf".into())
        } else if v == f64::NEG_INFINITY {
            Bound::Named("-inf".into())
        } else {
            Bound::Finite(v)
        }
    }

    pub fn value(&self) -> Result<f64, MeasureError> {
        match self {
            Bound::Finite(v) => Ok(*v),
            Bound::Named(s) => match s.trim() {
                "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
                "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
                other => other.parse::<f64>().map_err(|_| MeasureError::Bound(other.to_string())),
            },
        }
    }
}

impl MeasureSpec {
    pub fn build(&self) -> Result<Measure, MeasureError> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom { t: a.t, weight: Complex64::new(a.re, a.im) })
            .collect();
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (index, p) in self.pieces.iter().enumerate() {
            let re = Expression::parse(&p.re).map_err(|source| MeasureError::Density { index, field: "re", source })?;
            let im = match &p.im {
                Some(s) => Expression::parse(s).map_err(|source| MeasureError::Density { index, field: "im", source })?,
                None => Expression::constant(0.0),
            };
            pieces.push(Piece::new(p.a.value()?, p.b.value()?, re, im));
        }
        Measure::new(atoms, pieces)
    }
}

/// Test measures used by the identity checks: atoms at 0, 1, -1 and
/// the densities `e^{-|t|}`, `e^{-t}` on `(0,∞)`, `e^{t}` on `(-∞,0)` and `e^{-t²}`.
pub fn test_corpus() -> Vec<(&'static str, Measure)> {
    let one = Complex64::new(1.0, 0.0);
    let inf = f64::INFINITY;
    vec![
        ("dirac0", Measure::dirac(0.0, one)),
        ("dirac1", Measure::dirac(1.0, one)),
        ("dirac-1", Measure::dirac(-1.0, one)),
        ("exp_abs", Measure::density(-inf, inf, "exp(-abs(t))").expect("valid")),
        ("exp_right", Measure::density(0.0, inf, "exp(-t)").expect("valid")),
        ("exp_left", Measure::density(-inf, 0.0, "exp(t)").expect("valid")),
        ("gauss", Measure::density(-inf, inf, "exp(-t^2)").expect("valid")),
    ]
}
