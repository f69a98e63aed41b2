//! Report exports: CSV sequences and JSON reports.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::analysis::AnalysisReport;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::input(format!("unknown format `{other}` (expected csv or json)"))),
        }
    }
}

/// `t,c_t,delta_t` rows. A sequence that was not requested leaves its column
/// empty; with neither requested only the header is written.
pub fn to_csv(report: &AnalysisReport) -> String {
    let sizes = report.sizes.as_ref().map(|s| s.values.as_slice()).unwrap_or(&[]);
    let deltas = report.distortion.as_ref().map(|d| d.values.as_slice()).unwrap_or(&[]);
    let mut out = String::from("t,c_t,delta_t\n");
    for t in 0..sizes.len().max(deltas.len()) {
        let c = sizes.get(t).map(|c| c.to_string()).unwrap_or_default();
        let d = deltas.get(t).map(|d| d.to_string()).unwrap_or_default();
        writeln!(out, "{t},{c},{d}").expect("writing to a String");
    }
    out
}

pub fn to_json(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<AnalysisReport> {
    serde_json::from_str(text).map_err(|e| Error::input(format!("report parse error: {e}")))
}

pub fn render(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Csv => to_csv(report),
        Format::Json => to_json(report),
    }
}

pub fn cmd_export(report: &AnalysisReport, format: Format, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, render(report, format))?;
    Ok(())
}
