use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use serde_json::value::RawValue;

use super::{sequence_label, SweepRow};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::Unknown {
                kind: "report format",
                spec: s.to_string(),
            }),
        }
    }
}

pub const COLUMNS: [&str; 10] = [
    "theorem_id",
    "function",
    "sequence",
    "n",
    "t",
    "lhs",
    "rhs",
    "margin",
    "preconds_ok",
    "status",
];

/// 17 significant digits, enough to round-trip any `f64`.
fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn json_float(x: f64) -> Box<RawValue> {
    let text = if x.is_finite() {
        fmt_float(x)
    } else {
        "null".to_string()
    };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

/// Rows in report order: stably sorted by theorem id string, then `n`.
fn ordered(rows: &[SweepRow]) -> Vec<&SweepRow> {
    let mut out: Vec<&SweepRow> = rows.iter().collect();
    out.sort_by(|a, b| {
        a.report
            .theorem
            .as_str()
            .cmp(b.report.theorem.as_str())
            .then(a.report.n.cmp(&b.report.n))
    });
    out
}

#[derive(Serialize)]
struct JsonRow<'a> {
    theorem_id: &'a str,
    function: &'a str,
    sequence: String,
    n: usize,
    t: Option<usize>,
    lhs: Box<RawValue>,
    rhs: Box<RawValue>,
    margin: Box<RawValue>,
    preconds_ok: bool,
    status: &'a str,
}

/// Writes `rows` to any writer.
pub fn write_report<W: Write>(
    rows: &[SweepRow],
    format: ReportFormat,
    out: W,
) -> std::io::Result<()> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(COLUMNS)?;
            for row in ordered(rows) {
                let r = &row.report;
                w.write_record([
                    r.theorem.as_str().to_string(),
                    r.function.clone(),
                    sequence_label(&r.sequences),
                    r.n.to_string(),
                    r.t.map(|t| t.to_string()).unwrap_or_default(),
                    fmt_float(r.lhs),
                    fmt_float(r.rhs),
                    fmt_float(r.margin),
                    r.preconds_ok().to_string(),
                    row.status.as_str().to_string(),
                ])?;
            }
            w.flush()
        }
        ReportFormat::Json => {
            let records: Vec<JsonRow> = ordered(rows)
                .into_iter()
                .map(|row| {
                    let r = &row.report;
                    JsonRow {
                        theorem_id: r.theorem.as_str(),
                        function: &r.function,
                        sequence: sequence_label(&r.sequences),
                        n: r.n,
                        t: r.t,
                        lhs: json_float(r.lhs),
                        rhs: json_float(r.rhs),
                        margin: json_float(r.margin),
                        preconds_ok: r.preconds_ok(),
                        status: row.status.as_str(),
                    }
                })
                .collect();
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &records)?;
            out.write_all(b"\n")?;
            out.flush()
        }
    }
}

/// Writes `rows` to `path`, reporting I/O failures with the path.
pub fn emit_report(rows: &[SweepRow], format: ReportFormat, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_report(rows, format, BufWriter::new(file)).map_err(io_err)
}
