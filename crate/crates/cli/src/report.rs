//! Output documents. Every float is written with 17 significant digits so
//! that identical runs produce byte-identical reports, and every document
//! starts with the run configuration.

use std::io;

use krein_core::quad::{WindowRule, PV_N0};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

/// `{:.16e}`, or `inf`, `-inf`, `nan`. Negative zero prints as zero.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        format!("{:.16e}", 0.0)
    } else if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// `a+bi` with both parts in [`fmt_f64`] form.
pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { "-" } else { "+" };
    format!("{}{sign}{}i", fmt_f64(z.re), fmt_f64(z.im.abs()))
}

/// Pretty JSON whose floats use [`fmt_f64`]; serde writes non-finite
/// floats as `null` before they reach the formatter.
struct Fixed(PrettyFormatter<'static>);

impl Formatter for Fixed {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fmt_f64(v).as_bytes())
    }
    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Fixed(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("reports serialize");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

#[derive(Debug, Clone, Serialize)]
pub struct Schedule {
    pub decay_ratio: f64,
    pub confirmations: usize,
    pub min_windows: usize,
    pub max_windows: usize,
    /// Half-width of the first symmetric truncation `[-N0, N0]`.
    pub pv_n0: f64,
}

/// Run configuration echoed at the top of every report.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tolerance: f64,
    pub budget: u64,
    pub format: &'static str,
    pub seed: u64,
    pub schedule: Schedule,
}

impl Header {
    pub fn new(tolerance: f64, budget: u64, format: &'static str, seed: u64) -> Header {
        let rule = WindowRule::default();
        Header {
            tolerance,
            budget,
            format,
            seed,
            schedule: Schedule {
                decay_ratio: rule.decay_ratio,
                confirmations: rule.confirmations,
                min_windows: rule.min_windows,
                max_windows: rule.max_windows,
                pv_n0: PV_N0,
            },
        }
    }

    /// `# key=value` lines for CSV output.
    pub fn csv_comment(&self, command: &str) -> String {
        let s = &self.schedule;
        format!(
            "# command={command}\n# tolerance={}\n# budget={}\n# seed={}\n# decay_ratio={}\n# confirmations={}\n# min_windows={}\n# max_windows={}\n# pv_n0={}\n",
            fmt_f64(self.tolerance),
            self.budget,
            self.seed,
            fmt_f64(s.decay_ratio),
            s.confirmations,
            s.min_windows,
            s.max_windows,
            fmt_f64(s.pv_n0),
        )
    }
}

/// Where a value was evaluated.
#[derive(Debug, Clone, Copy)]
pub enum Point {
    Real(f64),
    Complex(Complex64),
}

/// One evaluation: `value` and `err` are `None` when quadrature failed.
#[derive(Debug, Clone)]
pub struct Row {
    pub point: Point,
    pub value: Option<Complex64>,
    pub err: Option<f64>,
    pub hint: String,
}

#[derive(Serialize)]
struct RowJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<Complex64>,
    re: Option<f64>,
    im: Option<f64>,
    err: Option<f64>,
    converged: bool,
    #[serde(skip_serializing_if = "str::is_empty")]
    hint: &'a str,
}

#[derive(Serialize)]
struct TableJson<'a> {
    config: &'a Header,
    command: &'a str,
    rows: Vec<RowJson<'a>>,
}

pub fn table_json(header: &Header, command: &str, rows: &[Row]) -> String {
    let rows = rows
        .iter()
        .map(|r| RowJson {
            x: if let Point::Real(x) = r.point { Some(x) } else { None },
            z: if let Point::Complex(z) = r.point { Some(z) } else { None },
            re: r.value.map(|v| v.re),
            im: r.value.map(|v| v.im),
            err: r.err,
            converged: r.value.is_some(),
            hint: &r.hint,
        })
        .collect();
    to_json(&TableJson { config: header, command, rows })
}

/// Header comment, then columns `x,re,im,err`; failed rows hold `nan`.
pub fn table_csv(header: &Header, command: &str, rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "re", "im", "err"]).expect("in-memory write");
    for r in rows {
        let x = match r.point {
            Point::Real(x) => fmt_f64(x),
            Point::Complex(z) => fmt_complex(z),
        };
        let v = r.value.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let err = r.err.unwrap_or(f64::NAN);
        w.write_record([x, fmt_f64(v.re), fmt_f64(v.im), fmt_f64(err)]).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8");
    header.csv_comment(command) + &body
}

/// CSV rows `label,value,threshold` after the header and summary comments.
pub fn evidence_csv(header: &Header, command: &str, summary: &[(String, String)], evidence: &[(String, f64, f64)]) -> String {
    let mut out = header.csv_comment(command);
    for (k, v) in summary {
        out += &format!("# {k}={v}\n");
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["label", "value", "threshold"]).expect("in-memory write");
    for (label, value, threshold) in evidence {
        w.write_record([label.clone(), fmt_f64(*value), fmt_f64(*threshold)]).expect("in-memory write");
    }
    out + &String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV is UTF-8")
}
