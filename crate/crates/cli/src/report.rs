//! Report assembly and canonical serialization.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, RunConfig};
use crate::suites::SuiteRecord;
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub config: RunConfig,
    pub suites: Vec<SuiteRecord>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteRecord> {
        self.suites.iter().find(|s| s.suite.name() == name)
    }
}

/// JSON with object keys sorted at every level.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    // serde_json's Map is a BTreeMap unless `preserve_order` is enabled
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.3e}"))
}

pub fn to_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    for r in &report.suites {
        let _ = write!(
            out,
            "{} {:<20} samples={} resampled={} max_rel={} min_rel={}",
            if r.pass { "PASS" } else { "FAIL" },
            r.suite.name(),
            r.samples,
            r.resampled_poles,
            fmt_opt(r.max_relative),
            fmt_opt(r.min_relative),
        );
        if let Some(e) = &r.error {
            let _ = write!(out, " error=\"{e}\"");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "verdict: {}", if report.passed() { "PASS" } else { "FAIL" });
    out
}

pub fn render(report: &VerificationReport, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => to_canonical_json(report),
        OutputFormat::Text => Ok(to_text(report)),
    }
}

/// Writes the rendered report to `path`, or stdout when absent. Returns bytes written.
pub fn emit(report: &VerificationReport, format: OutputFormat, path: Option<&Path>) -> Result<usize, CliError> {
    write_bytes(render(report, format)?.as_bytes(), path)
}

pub(crate) fn write_bytes(bytes: &[u8], path: Option<&Path>) -> Result<usize, CliError> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(bytes.len())
}
