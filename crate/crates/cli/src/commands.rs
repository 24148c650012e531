//! The three command families. Each returns the report text and the exit
//! code, or a [`CliError`].

use std::cell::RefCell;
use std::f64::consts::PI;
use std::path::Path;

use krein_core::circle::{
    cauchy_integral_disc, hilbert_circle, pv_circle, wiener_norm, CircleError, CoeffSeq, DualValue,
};
use krein_core::expr::Expression;
use krein_core::measure::Measure;
use krein_core::quad::{integrate_oscillatory, OscKind, PVResult, QuadConfig};
use krein_core::transforms::{
    carleman, hilbert_generalized_pv, hilbert_line_pv, BochnerTransform, TransformError,
};
use krein_core::verify::{
    c0_log_example, carleman_convergence, carleman_identity, check_3alpha, check_6alpha, check_c0, check_d1,
    check_d2, check_s1, check_s2, check_s3, hilbert_identity, hilbert_involution_e1, povzner, ConvexityPartition,
    Verdict,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::report::{self, Header, Point, Row};
use crate::{CircleArgs, CircleKind, Format, Inputs, TransformArgs, TransformKind, VerifyArgs, VerifyKind};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_NON_CONVERGENCE: u8 = 2;
pub const EXIT_FAILED: u8 = 3;
pub const EXIT_INCONCLUSIVE: u8 = 4;

/// Keyword for the partition `[-x*, 0, x*]` of `1/sqrt(1+log(abs(x))^2)`.
pub const LOG_EXAMPLE_BREAKPOINTS: &str = "auto:paper-example";

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input: exit 1.
    Input(String),
}

impl CliError {
    fn input(msg: impl Into<String>) -> CliError {
        CliError::Input(msg.into())
    }
}

/// Report text plus exit code.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

pub struct Run {
    pub header: Header,
    pub cfg: QuadConfig,
    pub format: Format,
}

fn need<T: Clone>(v: &Option<T>, flag: &str) -> Result<T, CliError> {
    v.clone().ok_or_else(|| CliError::input(format!("missing --{flag}")))
}

fn load_measure(path: &Path) -> Result<Measure, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    Measure::from_json(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_coeffs(path: &Path) -> Result<CoeffSeq, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    CoeffSeq::from_json(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn expression(inputs: &Inputs) -> Result<Expression, CliError> {
    let src = need(&inputs.expr, "expr")?;
    Expression::parse(&src).map_err(|e| CliError::input(format!("--expr {src:?}: {e}")))
}

fn measure(inputs: &Inputs) -> Result<Measure, CliError> {
    load_measure(&need(&inputs.measure, "measure")?)
}

fn points(inputs: &Inputs) -> Result<Vec<f64>, CliError> {
    let p = need(&inputs.points, "points")?;
    if p.is_empty() {
        return Err(CliError::input("--points is empty"));
    }
    Ok(p)
}

/// First error raised inside a closure that must return a plain value.
#[derive(Default)]
struct FirstError(RefCell<Option<String>>);

impl FirstError {
    fn wrap(&self, r: Result<Complex64, TransformError>) -> Complex64 {
        r.unwrap_or_else(|e| {
            self.0.borrow_mut().get_or_insert(e.to_string());
            Complex64::new(f64::NAN, 0.0)
        })
    }
    fn take(&self) -> Option<String> {
        self.0.borrow_mut().take()
    }
}

fn row(point: Point, r: PVResult) -> Row {
    if r.converged {
        Row { point, value: Some(r.value), err: Some(r.abs_error_estimate), hint: String::new() }
    } else {
        Row { point, value: None, err: None, hint: r.divergence_hint }
    }
}

fn failed_row(point: Point, e: impl ToString) -> Row {
    Row { point, value: None, err: None, hint: e.to_string() }
}

/// Non-convergence of a table construction becomes failed rows; anything
/// else is an input error.
fn table_or_rows(
    built: Result<BochnerTransform, TransformError>,
    xs: &[f64],
) -> Result<Result<BochnerTransform, Vec<Row>>, CliError> {
    match built {
        Ok(t) => Ok(Ok(t)),
        Err(TransformError::NonConvergence(why)) => {
            Ok(Err(xs.iter().map(|&x| failed_row(Point::Real(x), &why)).collect()))
        }
        Err(e) => Err(CliError::input(e.to_string())),
    }
}

fn bochner_rows(mu: &Measure, k: u32, xs: &[f64], cfg: &QuadConfig) -> Result<Vec<Row>, CliError> {
    let table = match table_or_rows(BochnerTransform::new(mu, k, cfg), xs)? {
        Ok(t) => t,
        Err(rows) => return Ok(rows),
    };
    Ok(xs
        .iter()
        .map(|&x| match table.eval_with_error(x) {
            Ok((v, err)) => Row { point: Point::Real(x), value: Some(v), err: Some(err), hint: String::new() },
            Err(e) => failed_row(Point::Real(x), e),
        })
        .collect())
}

pub fn transform(run: &Run, args: &TransformArgs) -> Result<Outcome, CliError> {
    let cfg = &run.cfg;
    let inputs = &args.inputs;
    let rows: Vec<Row> = match args.kind {
        TransformKind::Fourier => bochner_rows(&measure(inputs)?, 0, &points(inputs)?, cfg)?,
        TransformKind::Bochner => bochner_rows(&measure(inputs)?, inputs.k.unwrap_or(0), &points(inputs)?, cfg)?,
        TransformKind::Carleman => {
            let mu = measure(inputs)?;
            let mut rows = Vec::new();
            for z in need(&inputs.z, "z")? {
                rows.push(match carleman(&mu, z, cfg) {
                    Ok(v) => Row {
                        point: Point::Complex(z),
                        value: Some(v.value),
                        err: Some(v.abs_error_estimate),
                        hint: String::new(),
                    },
                    Err(TransformError::NonConvergence(why)) => failed_row(Point::Complex(z), why),
                    Err(e) => return Err(CliError::input(format!("z = {z}: {e}"))),
                });
            }
            rows
        }
        TransformKind::Hilbert => {
            let xs = points(inputs)?;
            if inputs.expr.is_some() {
                let f = expression(inputs)?;
                let g = |t: f64| f.eval_or_nan(t);
                xs.iter().map(|&x| row(Point::Real(x), hilbert_generalized_pv(&g, x, cfg))).collect()
            } else {
                // H applied to the Fourier transform of the measure.
                let mu = measure(inputs)?;
                let table = match table_or_rows(BochnerTransform::new(&mu, 0, &cfg.with_tol(0.01 * cfg.tol)), &xs)? {
                    Ok(t) => t,
                    Err(rows) => return finish_table(run, args, rows),
                };
                let errors = FirstError::default();
                let phi = |t: f64| errors.wrap(table.eval(t));
                xs.iter()
                    .map(|&x| {
                        let r = hilbert_line_pv(&phi, x, cfg);
                        match errors.take() {
                            Some(why) => failed_row(Point::Real(x), why),
                            None => row(Point::Real(x), r),
                        }
                    })
                    .collect()
            }
        }
        TransformKind::Sine | TransformKind::Cosine => {
            let f = expression(inputs)?;
            let kind = if matches!(args.kind, TransformKind::Sine) { OscKind::Sin } else { OscKind::Cos };
            let g = |x: f64| f.eval_or_nan(x);
            let scale = (2.0 / PI).sqrt();
            let mut rows = Vec::new();
            for t in points(inputs)? {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(CliError::input(format!("frequency must be finite and > 0, got {t}")));
                }
                let mut r = integrate_oscillatory(&g, t, kind, 0.0, cfg);
                r.value = Complex64::new(r.value.re * scale, 0.0);
                r.abs_error_estimate *= scale;
                rows.push(row(Point::Real(t), r));
            }
            rows
        }
    };
    finish_table(run, args, rows)
}

fn finish_table(run: &Run, args: &TransformArgs, rows: Vec<Row>) -> Result<Outcome, CliError> {
    let command = format!("transform {}", args.kind.name());
    let text = match run.format {
        Format::Json => report::table_json(&run.header, &command, &rows),
        Format::Csv => report::table_csv(&run.header, &command, &rows),
    };
    let code = if rows.iter().all(|r| r.value.is_some()) { EXIT_OK } else { EXIT_NON_CONVERGENCE };
    Ok(Outcome { text, code })
}

/// 0 passed, 3 failed, 4 inconclusive: a function of the verdict alone.
pub fn verdict_code(v: &Verdict) -> u8 {
    if v.passed {
        EXIT_OK
    } else if v.inconclusive {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_FAILED
    }
}

#[derive(Serialize)]
struct VerdictDoc<'a> {
    config: &'a Header,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<Complex64>,
    verdict: &'a Verdict,
}

fn verdict_outcome(run: &Run, command: &str, value: Option<Complex64>, v: &Verdict) -> Outcome {
    let text = match run.format {
        Format::Json => report::to_json(&VerdictDoc { config: &run.header, command, value, verdict: v }),
        Format::Csv => {
            let opt = |z: Option<Complex64>| z.map(report::fmt_complex).unwrap_or_default();
            let mut summary = vec![
                ("check".to_string(), v.check.clone()),
                ("passed".to_string(), v.passed.to_string()),
                ("inconclusive".to_string(), v.inconclusive.to_string()),
                ("lhs".to_string(), opt(v.lhs)),
                ("rhs".to_string(), opt(v.rhs)),
                ("abs_gap".to_string(), v.abs_gap.map(report::fmt_f64).unwrap_or_default()),
            ];
            if let Some(z) = value {
                summary.push(("value".to_string(), report::fmt_complex(z)));
            }
            summary.extend(v.notes.iter().map(|n| ("note".to_string(), n.clone())));
            let evidence: Vec<_> = v.evidence.iter().map(|e| (e.label.clone(), e.value, e.threshold)).collect();
            report::evidence_csv(&run.header, command, &summary, &evidence)
        }
    };
    Outcome { text, code: verdict_code(v) }
}

fn partition(inputs: &Inputs) -> Result<ConvexityPartition, CliError> {
    let raw = inputs.breakpoints.clone().unwrap_or_default();
    if raw.trim() == LOG_EXAMPLE_BREAKPOINTS {
        return Ok(c0_log_example().1);
    }
    let breakpoints = crate::parse::reals(&raw).map_err(CliError::Input)?;
    let signs = need(&inputs.signs, "signs")?;
    let signs = crate::parse::signs(&signs).map_err(CliError::Input)?;
    ConvexityPartition::new(breakpoints, signs).map_err(CliError::Input)
}

/// `--points`, or four points in `[-3, 3]` drawn from the run seed.
fn sample_points(inputs: &Inputs, seed: u64) -> Vec<f64> {
    match &inputs.points {
        Some(p) if !p.is_empty() => p.clone(),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut p: Vec<f64> = (0..4).map(|_| rng.gen_range(-3.0..3.0)).collect();
            p.sort_by(f64::total_cmp);
            p
        }
    }
}

fn single_z(inputs: &Inputs) -> Result<Complex64, CliError> {
    match need(&inputs.z, "z")?.as_slice() {
        [z] => Ok(*z),
        _ => Err(CliError::input("--z takes a single complex number here")),
    }
}

pub fn verify(run: &Run, args: &VerifyArgs) -> Result<Outcome, CliError> {
    let cfg = &run.cfg;
    let inputs = &args.inputs;
    let b = inputs.b.unwrap_or(0.0);
    if !(b >= 0.0 && b.is_finite()) {
        return Err(CliError::input(format!("--b must be finite and >= 0, got {b}")));
    }
    let v = match args.kind {
        VerifyKind::S1 => check_s1(&expression(inputs)?, inputs.m.unwrap_or(0), cfg),
        VerifyKind::S2 => check_s2(&expression(inputs)?, cfg),
        VerifyKind::S3 => {
            let m = inputs.m.unwrap_or(1);
            if m == 0 {
                return Err(CliError::input("--m must be >= 1 for s3"));
            }
            check_s3(&expression(inputs)?, m, cfg)
        }
        VerifyKind::T3a => check_3alpha(&expression(inputs)?, cfg),
        VerifyKind::D1 => check_d1(&expression(inputs)?, b, cfg),
        VerifyKind::D2 => check_d2(&expression(inputs)?, b, cfg),
        VerifyKind::A6 => check_6alpha(&expression(inputs)?, b, cfg),
        VerifyKind::C0 => check_c0(&expression(inputs)?, &partition(inputs)?, cfg),
        VerifyKind::Carleman => {
            let mu = measure(inputs)?;
            let z = single_z(inputs)?;
            if args.convergence_only {
                carleman_convergence(&mu, z, cfg)
            } else {
                carleman_identity(&mu, z, cfg)
            }
        }
        VerifyKind::Hilbert => hilbert_identity(&measure(inputs)?, need(&inputs.x, "x")?, cfg),
        VerifyKind::Povzner => povzner(&measure(inputs)?, inputs.k.unwrap_or(0), single_z(inputs)?, cfg),
        VerifyKind::E1 => hilbert_involution_e1(&expression(inputs)?, &sample_points(inputs, run.header.seed), cfg),
    };
    Ok(verdict_outcome(run, &format!("verify {}", args.kind.name()), None, &v))
}

/// Verdict of a dual-route circle computation: `lhs` from the coefficient
/// formula, `rhs` from quadrature.
fn dual_verdict(name: &str, r: Result<DualValue, CircleError>, tol: f64) -> Result<(Option<Complex64>, Verdict), CliError> {
    let mut v = Verdict::new(name);
    match r {
        Ok(d) => {
            let ok = v.sides(d.value, d.quadrature, 10.0 * tol);
            Ok((Some(d.value), v.decide(ok)))
        }
        Err(CircleError::Inconsistent { formula, quadrature, .. }) => {
            v.sides(formula, quadrature, 10.0 * tol);
            v.note("coefficient formula and quadrature disagree");
            Ok((Some(formula), v.decide(false)))
        }
        Err(CircleError::NonConvergence(why)) => Ok((None, v.inconclusive(why))),
        Err(e) => Err(CliError::input(e.to_string())),
    }
}

#[derive(Serialize)]
struct HilbertDoc<'a> {
    config: &'a Header,
    command: &'a str,
    coeffs: krein_core::circle::CoeffSpec,
    input_norm: f64,
    output_norm: f64,
    input_in_w0: bool,
}

pub fn circle(run: &Run, args: &CircleArgs) -> Result<Outcome, CliError> {
    let inputs = &args.inputs;
    let w = load_coeffs(&need(&inputs.coeffs, "coeffs")?)?;
    let tol = run.cfg.tol;
    let command = format!("circle {}", args.kind.name());
    let (value, v) = match args.kind {
        CircleKind::Cauchy => dual_verdict("cauchy", cauchy_integral_disc(&w, single_z(inputs)?, tol), tol)?,
        CircleKind::Pv => dual_verdict("pv", pv_circle(&w, single_z(inputs)?, tol), tol)?,
        CircleKind::Isometry => {
            let mut v = Verdict::new("isometry");
            if !w.in_w0() {
                (None, v.inconclusive(format!("c_0 = {} must vanish", w.get(0))))
            } else {
                let hw = hilbert_circle(&w);
                let inv = wiener_norm(&hilbert_circle(&hw).add(&w));
                v.evidence("‖H²w + w‖", inv, 0.0);
                let ok = v.sides(Complex64::new(wiener_norm(&hw), 0.0), Complex64::new(wiener_norm(&w), 0.0), 0.0);
                (None, v.decide(ok && inv == 0.0))
            }
        }
        CircleKind::Hilbert => {
            let hw = hilbert_circle(&w);
            let text = match run.format {
                Format::Json => report::to_json(&HilbertDoc {
                    config: &run.header,
                    command: &command,
                    coeffs: hw.to_spec(),
                    input_norm: wiener_norm(&w),
                    output_norm: wiener_norm(&hw),
                    input_in_w0: w.in_w0(),
                }),
                Format::Csv => {
                    let mut out = run.header.csv_comment(&command);
                    out += &format!("# input_norm={}\n", report::fmt_f64(wiener_norm(&w)));
                    out += &format!("# output_norm={}\n", report::fmt_f64(wiener_norm(&hw)));
                    let mut csv = csv::Writer::from_writer(Vec::new());
                    csv.write_record(["n", "re", "im"]).expect("in-memory write");
                    for (n, c) in hw.iter() {
                        csv.write_record([n.to_string(), report::fmt_f64(c.re), report::fmt_f64(c.im)])
                            .expect("in-memory write");
                    }
                    out + &String::from_utf8(csv.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
                }
            };
            return Ok(Outcome { text, code: EXIT_OK });
        }
    };
    Ok(verdict_outcome(run, &command, value, &v))
}
