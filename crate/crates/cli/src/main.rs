use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hcalc::suites::{run_suite, SuiteConfig, DEFAULT_SAMPLES, DEFAULT_SEED, SUITES};
use hcalc::Error;
use serde_json::json;

#[derive(Parser)]
#[command(name = "hcalc", version, about = "Deterministic numerical experiments for the strip and sector functional calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite and print its JSON report. Exit status 0 iff every case passes.
    Run(RunArgs),
    /// List the available suites.
    List,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Suite name, or `all` (see `hcalc list`) [default: all]
    #[arg(long)]
    suite: Option<String>,
    /// Master seed for every random instance and Gaussian stream [default: 42]
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo samples per estimate [default: 20000]
    #[arg(long)]
    samples: Option<usize>,
    /// Replace the tolerance of closeness and residual cases [default: per case]
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Strip half-height for the fourier-pair suite [default: 0.5, 1 and 2]
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Gabor translation half-range K [default: 12]
    #[arg(long, allow_negative_numbers = true)]
    gabor_k: Option<i64>,
    /// Gabor modulation range N [default: 32]
    #[arg(long, allow_negative_numbers = true)]
    gabor_n: Option<i64>,
    /// Directory for the JSON report and CSV curves [default: none]
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file with the same fields; flags win on conflict
    #[arg(long)]
    json: Option<PathBuf>,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Dimension(_) => "dimension",
        Error::Param(_) => "parameter",
        Error::Singular => "singular",
        Error::NoConvergence(_) => "no-convergence",
        Error::Method(_) => "method",
        Error::ContourTooClose { .. } => "contour-too-close",
        Error::NotElementary(_) => "not-elementary",
        Error::Grid(_) => "grid",
        Error::UnknownSuite(_) => "unknown-suite",
        Error::Io(_) => "io",
    }
}

// A closed stdout (e.g. piped into `head`) is not an error worth a panic.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn fail(kind: &str, message: String) -> ExitCode {
    let report = json!({ "error": { "kind": kind, "message": message } });
    emit(&format!("{}\n", serde_json::to_string_pretty(&report).expect("json")));
    ExitCode::from(2)
}

fn config(args: RunArgs) -> Result<SuiteConfig, (String, String)> {
    let mut cfg = match &args.json {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ("io".to_string(), format!("{}: {e}", path.display())))?;
            serde_json::from_str::<SuiteConfig>(&text).map_err(|e| ("config".to_string(), format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig::default(),
    };
    if let Some(s) = args.suite {
        cfg.suite = s;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(s) = args.samples {
        cfg.samples = s;
    }
    cfg.tol = args.tol.or(cfg.tol);
    cfg.omega = args.omega.or(cfg.omega);
    cfg.gabor_k = args.gabor_k.or(cfg.gabor_k);
    cfg.gabor_n = args.gabor_n.or(cfg.gabor_n);
    cfg.out = args.out.or(cfg.out);
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => return fail("usage", e.render().to_string().trim_end().to_string()),
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match cli.command {
        Command::List => {
            let mut text = String::new();
            for s in SUITES {
                text += &format!("{:<24} {}\n", s.name, s.anchor);
            }
            text += &format!("{:<24} every suite above (defaults: seed {DEFAULT_SEED}, samples {DEFAULT_SAMPLES})\n", "all");
            emit(&text);
            ExitCode::SUCCESS
        }
        Command::Run(args) => {
            let cfg = match config(args) {
                Ok(c) => c,
                Err((kind, msg)) => return fail(&kind, msg),
            };
            match run_suite(&cfg) {
                Ok(report) => {
                    emit(&report.to_json());
                    for c in report.failures() {
                        eprintln!("FAIL {}: value {} expected {} tol {}", c.name, c.value, c.expected, c.tol);
                    }
                    if report.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => fail(error_kind(&e), e.to_string()),
            }
        }
    }
}
