//! Seeded verification harness for the `odd-elliptic` identity suites.

pub mod config;
pub mod report;
pub mod suites;

use std::path::Path;

pub use config::{OutputFormat, RunConfig, Suite, SUITE_NAMES};
pub use report::{emit, VerificationReport, Verdict};
pub use suites::{run_suite, SuiteRecord};

use odd_elliptic::superkron::{constraint_scan, ScanReport};
use odd_elliptic::EllipticContext;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] odd_elliptic::Error),
}

impl CliError {
    /// 2 for configuration and I/O problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Json(_) => 2,
            CliError::Core(_) => 1,
        }
    }
}

/// Runs every configured suite in order.
pub fn run(config: &RunConfig) -> Result<VerificationReport, CliError> {
    config.validate()?;
    let suites: Vec<SuiteRecord> = config.suites.iter().map(|s| run_suite(config, *s)).collect();
    let verdict = if suites.iter().all(|s| s.pass) { Verdict::Pass } else { Verdict::Fail };
    Ok(VerificationReport {
        version: report::VERSION.to_string(),
        config: config.clone(),
        suites,
        verdict,
    })
}

/// The coefficient scan at a fixed τ.
pub fn scan(ctx: &EllipticContext, samples: usize, seed: u64) -> Result<ScanReport, CliError> {
    if samples == 0 {
        return Err(CliError::Config("samples must be at least 1".into()));
    }
    Ok(constraint_scan(ctx, samples, seed)?)
}

pub fn scan_text(report: &ScanReport) -> String {
    let mut out = String::new();
    for (cat, t) in &report.tallies {
        out.push_str(&format!(
            "{:<16} samples={} fay {}/{} heat {}/{} boundary {}/{} (pass/agree)\n",
            serde_json::to_value(cat).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default(),
            t.samples,
            t.fay_pass,
            t.fay_agree,
            t.heat_pass,
            t.heat_agree,
            t.boundary_pass,
            t.boundary_agree,
        ));
    }
    out.push_str(&format!(
        "resampled={} consistent={}\n",
        report.resampled_poles,
        report.consistent()
    ));
    out
}

pub fn emit_scan(report: &ScanReport, format: OutputFormat, path: Option<&Path>) -> Result<usize, CliError> {
    let s = match format {
        OutputFormat::Json => report::to_canonical_json(report)?,
        OutputFormat::Text => scan_text(report),
    };
    report::write_bytes(s.as_bytes(), path)
}
