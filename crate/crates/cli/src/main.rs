//! `krein`: transforms of measures, identity and membership checks, and the
//! Wiener algebra on the circle, from the command line.
//!
//! Exit codes: `transform` returns 0 on success, 2 if any point failed to
//! converge and 1 on input errors. `verify` and `circle` return 0 when the
//! verdict passed, 3 when it failed, 4 when inconclusive and 1 on input
//! errors.

mod commands;
mod parse;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use krein_core::quad::QuadConfig;
use num_complex::Complex64;

use commands::{CliError, Run, EXIT_INPUT};
use report::Header;

#[derive(Parser, Debug)]
#[command(name = "krein", version, about = "Transforms of measures, principal-value identities and Wiener algebra checks")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Absolute tolerance.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol: f64,
    /// Integrand evaluations allowed per quadrature.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomly chosen sample points.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a transform at points: one row (x, re, im, err) per point.
    Transform(TransformArgs),
    /// Run a checker and print its verdict.
    Verify(VerifyArgs),
    /// Coefficient-space operations on the circle.
    Circle(CircleArgs),
}

/// Inputs shared by all commands; each command reads the ones it needs.
#[derive(Args, Debug, Clone)]
pub struct Inputs {
    /// Measure JSON file.
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Coefficient JSON file.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Expression in x (or t).
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
    /// Comma-separated real points.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    points: Option<Vec<f64>>,
    /// Complex point(s) `a+bi`, comma-separated where a list is accepted.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = parse::complex)]
    z: Option<Vec<Complex64>>,
    /// Real point.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Transform order or measure class index.
    #[arg(long)]
    k: Option<u32>,
    /// Index of the trigonometric tail.
    #[arg(long)]
    m: Option<u32>,
    /// Upper limit b >= 0 of the bounded part.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Comma-separated breakpoints, or `auto:paper-example`.
    #[arg(long, allow_hyphen_values = true)]
    breakpoints: Option<String>,
    /// Convexity signs (+1 convex, -1 concave), one per piece.
    #[arg(long, allow_hyphen_values = true)]
    signs: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TransformKind {
    Fourier,
    Carleman,
    Hilbert,
    Bochner,
    Sine,
    Cosine,
}

impl TransformKind {
    fn name(self) -> &'static str {
        match self {
            TransformKind::Fourier => "fourier",
            TransformKind::Carleman => "carleman",
            TransformKind::Hilbert => "hilbert",
            TransformKind::Bochner => "bochner",
            TransformKind::Sine => "sine",
            TransformKind::Cosine => "cosine",
        }
    }
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[arg(value_enum)]
    kind: TransformKind,
    #[command(flatten)]
    inputs: Inputs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VerifyKind {
    S1,
    S2,
    S3,
    T3a,
    D1,
    D2,
    A6,
    C0,
    Carleman,
    Hilbert,
    Povzner,
    E1,
}

impl VerifyKind {
    fn name(self) -> &'static str {
        match self {
            VerifyKind::S1 => "s1",
            VerifyKind::S2 => "s2",
            VerifyKind::S3 => "s3",
            VerifyKind::T3a => "t3a",
            VerifyKind::D1 => "d1",
            VerifyKind::D2 => "d2",
            VerifyKind::A6 => "a6",
            VerifyKind::C0 => "c0",
            VerifyKind::Carleman => "carleman",
            VerifyKind::Hilbert => "hilbert",
            VerifyKind::Povzner => "povzner",
            VerifyKind::E1 => "e1",
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    kind: VerifyKind,
    /// For `carleman`: report only whether the PV limit exists.
    #[arg(long)]
    convergence_only: bool,
    #[command(flatten)]
    inputs: Inputs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum CircleKind {
    Cauchy,
    Pv,
    Hilbert,
    Isometry,
}

impl CircleKind {
    fn name(self) -> &'static str {
        match self {
            CircleKind::Cauchy => "cauchy",
            CircleKind::Pv => "pv",
            CircleKind::Hilbert => "hilbert",
            CircleKind::Isometry => "isometry",
        }
    }
}

#[derive(Args, Debug)]
pub struct CircleArgs {
    #[arg(value_enum)]
    kind: CircleKind,
    #[command(flatten)]
    inputs: Inputs,
}

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    let a = &cli.run;
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(CliError::Input(format!("--tol must be finite and > 0, got {}", a.tol)));
    }
    if a.budget == 0 {
        return Err(CliError::Input("--budget must be > 0".into()));
    }
    let run = Run {
        header: Header::new(a.tol, a.budget, a.format.name(), a.seed),
        cfg: QuadConfig::new(a.tol).with_budget(a.budget),
        format: a.format,
    };
    match &cli.cmd {
        Cmd::Transform(t) => commands::transform(&run, t),
        Cmd::Verify(v) => commands::verify(&run, v),
        Cmd::Circle(c) => commands::circle(&run, c),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if let Some(path) = &cli.run.out {
                if let Err(e) = std::fs::write(path, &outcome.text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(EXIT_INPUT);
                }
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.code)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
