//! Deterministic CSV and JSON writers.
//!
//! Every float is printed with 17 significant digits in scientific notation,
//! so identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fgc_core::analysis::{Comparison, PeakAnalysis};
use fgc_core::spectrum::SpectrumResult;
use serde::Serialize;
use serde_json::{json, Map, Number, Value};

/// `x` with 17 significant digits; non-finite values print as `nan`/`inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON number carrying the fixed formatting; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if x.is_finite() {
        Value::Number(Number::from_str(&fmt_f64(x)).expect("formatted float parses"))
    } else {
        Value::Null
    }
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// `#`-prefixed echo lines followed by the header.
fn csv_preamble(echo: &[(String, String)], header: &str) -> String {
    let mut out = String::new();
    for (k, v) in echo {
        for line in v.lines() {
            let _ = writeln!(out, "# {k}: {line}");
        }
    }
    out.push_str(header);
    out.push('\n');
    out
}

pub fn spectrum_csv(spec: &SpectrumResult, echo: &[(String, String)]) -> String {
    let mut out = csv_preamble(echo, "delta,branch1,branch2,branch3,total");
    for k in 0..spec.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(spec.grid[k]),
            fmt_f64(spec.branch_intensity[0][k]),
            fmt_f64(spec.branch_intensity[1][k]),
            fmt_f64(spec.branch_intensity[2][k]),
            fmt_f64(spec.total[k]),
        );
    }
    out
}

fn peaks_json(peaks: &PeakAnalysis) -> Value {
    json!({
        "peaks": peaks.peaks.iter().map(|p| json!({
            "location": num(p.location),
            "height": num(p.height),
            "fwhm": num(p.fwhm),
            "branch": p.branch,
        })).collect::<Vec<_>>(),
        "total_area": num(peaks.total_area),
        "branch_areas": nums(&peaks.branch_areas),
        "warnings": peaks.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })
}

pub fn spectrum_json(spec: &SpectrumResult, peaks: &PeakAnalysis, parameters: Value) -> Value {
    let poles: Vec<Value> = spec
        .branch_poles
        .iter()
        .enumerate()
        .flat_map(|(n, terms)| {
            terms.iter().map(move |t| {
                json!({
                    "branch": n + 1,
                    "location": num(t.pole.re),
                    "half_width": num(t.pole.im),
                    "fwhm": num(t.fwhm()),
                    "residue": [num(t.residue.re), num(t.residue.im)],
                    "order": t.order,
                    "trapped": t.trapped,
                })
            })
        })
        .collect();
    json!({
        "parameters": parameters,
        "method": spec.method.name(),
        "cross_terms": spec.cross_terms,
        "delta": nums(&spec.grid),
        "branch1": nums(&spec.branch_intensity[0]),
        "branch2": nums(&spec.branch_intensity[1]),
        "branch3": nums(&spec.branch_intensity[2]),
        "total": nums(&spec.total),
        "poles": poles,
        "analysis": peaks_json(peaks),
    })
}

pub fn comparison_json(c: &Comparison) -> Value {
    json!({
        "max_rel_err": num(c.max_rel_err),
        "rms_err": num(c.rms_err),
        "points": c.points,
    })
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

/// Two-column CSV with an echo preamble.
pub fn table_csv(echo: &[(String, String)], header: &str, rows: &[(f64, f64)]) -> String {
    let mut out = csv_preamble(echo, header);
    for &(a, b) in rows {
        let _ = writeln!(out, "{},{}", fmt_f64(a), fmt_f64(b));
    }
    out
}

/// Record of one command invocation, written next to its outputs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub scenario: String,
    pub parameters: Value,
    pub options: Map<String, Value>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, scenario: String, parameters: Value) -> Self {
        Self {
            command: command.into(),
            scenario,
            parameters,
            options: Map::new(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            wall_time_seconds: 0.0,
            outputs: Vec::new(),
        }
    }

    /// `<stem>.manifest.json` beside the first output.
    pub fn path_for(first_output: &Path) -> PathBuf {
        let stem = first_output
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        first_output.with_file_name(format!("{stem}.manifest.json"))
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, to_pretty(&serde_json::to_value(self).expect("manifest serializes")))
    }
}
