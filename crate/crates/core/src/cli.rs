//! Command-line front end.
//!
//! Every data command reads the pair either from a TOML config path or,
//! under `example <name> …`, from a built-in fixture. Reports are JSON on
//! stdout; curve/region/trace data is CSV (or JSON with `--format json`)
//! on stdout or `--out`.
//!
//! Exit codes: 0 success; 1 validation or domain failure; 2 config or
//! I/O error (also used by argument parsing); 3 no classification
//! criterion covers the pair.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classify::{admissible_region, classify_pair};
use crate::config::pair_from_path;
use crate::diagnostics::ratio_trace;
use crate::error::{Error, Result};
use crate::fixtures::fixture;
use crate::io::{write_curve_csv, write_region_csv, write_trace_csv};
use crate::rational::{Rational, Scalar};
use crate::report;
use crate::solver::{residual_max, sample_curve, solve_phi};
use crate::systems::SystemPair;

#[derive(Parser)]
#[command(
    name = "gdconj",
    version,
    about = "Conjugate function pairs of two-vertex interval systems: \
             evaluate, sample, classify, diagnose."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a pair definition and report the validated structure.
    Validate { config: PathBuf },
    /// Evaluate one conjugate function at a point, with an enclosure.
    Eval {
        config: PathBuf,
        #[command(flatten)]
        args: EvalArgs,
    },
    /// Sample a conjugate function at every depth-n interval endpoint.
    Curve {
        config: PathBuf,
        #[command(flatten)]
        args: CurveArgs,
    },
    /// Decide singular versus smooth versus identity.
    Classify { config: PathBuf },
    /// Largest conjugacy defect over a uniform grid.
    Residual {
        config: PathBuf,
        #[command(flatten)]
        args: ResidualArgs,
    },
    /// Emit a CSV lattice of the smooth-family admissible region.
    Region(RegionArgs),
    /// Per-depth interval diagnostics along one itinerary.
    Trace {
        config: PathBuf,
        #[command(flatten)]
        args: TraceArgs,
    },
    /// Run a subcommand against a built-in example pair.
    Example {
        /// One of: ex-affine, ex-lf-singular, ex-lf-smooth, ex-nonlinear.
        name: String,
        #[command(subcommand)]
        action: Action,
    },
}

#[derive(Subcommand)]
enum Action {
    Validate,
    Eval(EvalArgs),
    Curve(CurveArgs),
    Classify,
    Residual(ResidualArgs),
    Trace(TraceArgs),
}

#[derive(Args)]
struct EvalArgs {
    /// Which conjugate function: 0 or 1.
    #[arg(long)]
    vertex: usize,
    /// Evaluation point in [0,1], as a rational or decimal string.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Enclosure width to resolve to.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct CurveArgs {
    /// Which conjugate function: 0 or 1.
    #[arg(long)]
    vertex: usize,
    /// Subdivision depth; the curve has 2^depth + 1 points.
    #[arg(long, default_value_t = 8)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ResidualArgs {
    /// Grid points per corner.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// Enclosure width for each evaluation.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct RegionArgs {
    /// Lattice minimum for both coordinates (rational string).
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    min: String,
    /// Lattice maximum for both coordinates (rational string).
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    max: String,
    /// Lattice step (rational string).
    #[arg(long, default_value = "1/50")]
    step: String,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    /// Start vertex: 0 or 1.
    #[arg(long)]
    vertex: usize,
    /// Point whose itinerary is traced, as a rational or decimal string.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Number of descent steps.
    #[arg(long, default_value_t = 30)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Parse arguments, run, and return the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Validate { config } => validate(&config),
        Command::Eval { config, args } => perform(&pair_from_path(&config)?, Action::Eval(args)),
        Command::Curve { config, args } => perform(&pair_from_path(&config)?, Action::Curve(args)),
        Command::Classify { config } => perform(&pair_from_path(&config)?, Action::Classify),
        Command::Residual { config, args } => {
            perform(&pair_from_path(&config)?, Action::Residual(args))
        }
        Command::Region(args) => region(&args),
        Command::Trace { config, args } => perform(&pair_from_path(&config)?, Action::Trace(args)),
        Command::Example { name, action } => perform(&fixture(&name)?, action),
    }
}

/// `validate` prints a structured report even on failure, then exits 1.
fn validate(config: &PathBuf) -> Result<()> {
    match pair_from_path(config) {
        Ok(pair) => emit(&None, &report::to_bytes(&report::validate_report(&pair))),
        Err(e) if e.exit_code() == 1 => {
            emit(&None, &report::to_bytes(&report::validate_failure_report(&e)))?;
            Err(e)
        }
        Err(e) => Err(e),
    }
}

fn perform(pair: &SystemPair, action: Action) -> Result<()> {
    match action {
        Action::Validate => emit(&None, &report::to_bytes(&report::validate_report(pair))),
        Action::Eval(a) => {
            let x = Scalar::Exact(flag_rational("--x", &a.x)?);
            let v = solve_phi(pair, a.vertex, &x, a.tol)?;
            emit(
                &None,
                &report::to_bytes(&report::eval_report(a.vertex, &x, a.tol, &v)),
            )
        }
        Action::Curve(a) => {
            let sample = sample_curve(pair, a.vertex, a.depth)?;
            match a.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_curve_csv(&mut buf, &sample)?;
                    emit(&a.out, &buf)
                }
                Format::Json => emit(&a.out, &report::to_bytes(&report::curve_report(&sample))),
            }
        }
        Action::Classify => {
            let v = classify_pair(pair)?;
            emit(&None, &report::to_bytes(&report::verdict_report(&v)))
        }
        Action::Residual(a) => {
            let r = residual_max(pair, a.grid, a.tol)?;
            emit(&None, &report::to_bytes(&report::residual_report(&r, a.tol)))
        }
        Action::Trace(a) => {
            let x = Scalar::Exact(flag_rational("--x", &a.x)?);
            let trace = ratio_trace(pair, a.vertex, &x, a.depth)?;
            match a.format {
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_trace_csv(&mut buf, &trace)?;
                    emit(&a.out, &buf)
                }
                Format::Json => emit(&a.out, &report::to_bytes(&report::trace_report(&trace))),
            }
        }
    }
}

fn region(args: &RegionArgs) -> Result<()> {
    let min = flag_rational("--min", &args.min)?;
    let max = flag_rational("--max", &args.max)?;
    let step = flag_rational("--step", &args.step)?;
    if !step.is_positive() {
        return Err(Error::Config("region --step must be positive".into()));
    }
    if max < min {
        return Err(Error::Config("region --max must be at least --min".into()));
    }
    let mut axis = Vec::new();
    let mut v = min;
    while v <= max {
        if axis.len() >= 1000 {
            return Err(Error::Config(
                "region lattice too large: more than 1000 points per axis".into(),
            ));
        }
        axis.push(v.clone());
        v = &v + &step;
    }
    let cells = axis.iter().flat_map(|c00| {
        axis.iter()
            .map(move |c11| (c00.clone(), c11.clone(), admissible_region(c00, c11)))
    });
    let mut buf = Vec::new();
    write_region_csv(&mut buf, cells)?;
    emit(&args.out, &buf)
}

fn flag_rational(flag: &str, text: &str) -> Result<Rational> {
    text.parse()
        .map_err(|e: Error| Error::Config(format!("{flag}: {e}")))
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}
