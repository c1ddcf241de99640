use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use odd_elliptic::EllipticContext;
use odd_elliptic_cli::config::parse_complex;
use odd_elliptic_cli::{emit, emit_scan, run, scan, CliError, OutputFormat, RunConfig};

#[derive(Parser)]
#[command(name = "odd-elliptic", version, about = "Numerical checks of odd elliptic R-matrix identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run residual suites and report PASS/FAIL per suite.
    Verify(VerifyArgs),
    /// Sample ansatz coefficients and compare residual verdicts with the constraints.
    ScanCoefficients(ScanArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated suite names.
    #[arg(long)]
    suites: Option<String>,
    /// Comma-separated matrix sizes.
    #[arg(long)]
    n: Option<String>,
    /// Fixed τ such as `0.1+1.2i`, or `random`.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    cutoff: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    pole_margin: Option<String>,
    /// `canonical`, `truncated` or five complex numbers.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Index-shift coefficient B, or `a3`.
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    heat_k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    heat_kappa: Option<String>,
    /// `json` or `text`.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "0.1+1.2i", allow_hyphen_values = true)]
    tau: String,
    #[arg(long, default_value_t = odd_elliptic::context::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn verify_config(args: VerifyArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::from_file_contents(&std::fs::read_to_string(p)?)?,
        None => RunConfig::default(),
    };
    let flags = [
        ("suites", args.suites),
        ("n", args.n),
        ("tau", args.tau),
        ("samples", args.samples),
        ("seed", args.seed),
        ("cutoff", args.cutoff),
        ("tol", args.tol),
        ("pole-margin", args.pole_margin),
        ("coeffs", args.coeffs),
        ("b", args.b),
        ("heat-k", args.heat_k),
        ("heat-kappa", args.heat_kappa),
        ("format", args.format),
        ("output", args.output),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, &v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main_inner(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Verify(args) => {
            let cfg = verify_config(args)?;
            let report = run(&cfg)?;
            emit(&report, cfg.output_format, cfg.output_path.as_deref())?;
            Ok(report.passed())
        }
        Command::ScanCoefficients(args) => {
            let format: OutputFormat = args.format.parse()?;
            let tau = parse_complex(&args.tau)?;
            let ctx = EllipticContext::new(
                tau,
                odd_elliptic::context::DEFAULT_CUTOFF,
                args.tol,
                odd_elliptic::context::DEFAULT_POLE_MARGIN,
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
            let report = scan(&ctx, args.samples, args.seed)?;
            emit_scan(&report, format, args.output.as_deref())?;
            Ok(report.consistent())
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
