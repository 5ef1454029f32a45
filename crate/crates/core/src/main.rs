use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use braidnomial::report::{run, LoopSelection, RunConfig, RunMode, EXIT_INVALID};
use braidnomial::tracker::TrackerControls;

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Predict,
    Verify,
    Galois,
    Diagram,
}

/// Braid monodromy of Y^{mn} - X^g Y^{mp} + X^r = 0: closed-form
/// predictions checked against numerical root tracking.
#[derive(Parser)]
#[command(name = "braidnomial", version)]
struct Cli {
    /// Exponents n,p,g,r of Y^n - X^g Y^p + X^r
    #[arg(long, value_name = "n,p,g,r")]
    equation: String,
    /// zero | sigma | infinity | omega:<l> | all | composite:<a;b;..>
    #[arg(long = "loop", default_value = "all")]
    loop_: String,
    #[arg(long, value_enum, default_value = "verify")]
    mode: ModeArg,
    /// Series terms used by the series check
    #[arg(long, default_value_t = 40)]
    terms: usize,
    /// Radius of the circles around branch points (default 1e-3 of their modulus)
    #[arg(long)]
    delta: Option<f64>,
    /// Relative residual the tracker must reach
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Angle of the projection axis, in turns
    #[arg(long, default_value_t = braidnomial::projection::DEFAULT_DIRECTION, allow_negative_numbers = true)]
    direction: f64,
    /// Trace and extract without predictions (allowed when the gcd conditions fail)
    #[arg(long)]
    tracker_only: bool,
    /// Write the JSON report here instead of standard output
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Write the braid diagram here (diagram mode)
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Directory of cached traces
    #[arg(long, value_name = "DIR")]
    cache: Option<PathBuf>,
}

fn parse_equation(s: &str) -> Option<(u64, u64, u64, u64)> {
    let v: Vec<u64> = s.split(',').map(|x| x.trim().parse().ok()).collect::<Option<_>>()?;
    match v[..] {
        [a, b, c, d] => Some((a, b, c, d)),
        _ => None,
    }
}

fn invalid(msg: &str) -> ExitCode {
    eprintln!("braidnomial: {msg}");
    ExitCode::from(EXIT_INVALID as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(equation) = parse_equation(&cli.equation) else {
        return invalid("--equation expects four comma-separated non-negative integers");
    };
    let loops = match LoopSelection::parse(&cli.loop_) {
        Ok(l) => l,
        Err(e) => return invalid(&e.to_string()),
    };
    let mode = match cli.mode {
        ModeArg::Predict => RunMode::Predict,
        ModeArg::Verify => RunMode::Verify,
        ModeArg::Galois => RunMode::Galois,
        ModeArg::Diagram => RunMode::Diagram,
    };
    let cfg = RunConfig {
        equation,
        loops,
        terms: cli.terms,
        delta: cli.delta,
        controls: TrackerControls { tolerance: cli.tol, ..TrackerControls::default() },
        direction: cli.direction,
        tracker_only: cli.tracker_only,
        mode,
        report: cli.report.clone(),
        svg: cli.svg.clone(),
        cache: cli.cache.clone(),
    };
    let outcome = run(&cfg);
    let json = outcome.report.to_json();
    match &cli.report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                return invalid(&format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{json}"),
    }
    if let (Some(path), Some(text)) = (&cli.svg, &outcome.svg) {
        if let Err(e) = std::fs::write(path, text) {
            return invalid(&format!("cannot write {}: {e}", path.display()));
        }
    }
    if let Some(err) = &outcome.report.error {
        eprintln!("braidnomial: {}: {}", err.name, err.message);
    }
    ExitCode::from(outcome.report.exit_code() as u8)
}
