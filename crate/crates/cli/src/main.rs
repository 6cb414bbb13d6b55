//! `obswave`: optimal control times, spectral checks and multi-dimensional
//! time bounds from the command line.
//!
//! Exit codes: 0 on success (a "not observable" verdict is a success), 2 on
//! bad input, 3 when an internal consistency check fails.

mod error;
mod multid;
mod output;
mod reference;
mod spectral;
mod topt;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use obswave_core::Mode;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "obswave", version)]
#[command(about = "Boundary observability of the 1D wave equation under switching observation")]
struct Cli {
    /// Arithmetic for times: exact rational multiples of pi, or floats.
    #[arg(long, global = true, env = "OBSWAVE_MODE", default_value = "exact")]
    mode: ModeArg,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal control time of a schedule, a constant-rate switching or a
    /// single exchange.
    Topt(topt::ToptArgs),
    /// Sample T0 -> T_opt for constant-rate switching on a grid.
    ToptMap(MapArgs),
    /// Known discontinuities of T0 -> T_opt in an open range.
    Discontinuities(DiscontinuityArgs),
    /// Truncated observability constant of a schedule.
    Verify(spectral::VerifyArgs),
    /// Initial data whose observed energy nearly vanishes on an uncovering
    /// schedule.
    Counterexample(spectral::CounterexampleArgs),
    /// Multiplier-method time threshold for a domain and an observation curve.
    Multid(multid::MultidArgs),
}

#[derive(Args, Debug)]
pub struct MapArgs {
    /// First grid point, e.g. "pi/4" or 0.8.
    #[arg(long)]
    from: String,
    /// Last grid point (inclusive).
    #[arg(long)]
    to: String,
    #[arg(long)]
    step: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
pub struct DiscontinuityArgs {
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
    /// Truncation of the infinite families.
    #[arg(long, default_value_t = obswave_core::constant_rate::DEFAULT_MAX_ORDER)]
    max_order: i128,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mode = Mode::from(cli.mode);
    let out = output::Sink::new(cli.output);
    match cli.command {
        Command::Topt(args) => topt::run(&args, mode, &out),
        Command::ToptMap(args) => topt::run_map(&args, mode, &out),
        Command::Discontinuities(args) => topt::run_discontinuities(&args, &out),
        Command::Verify(args) => spectral::run_verify(&args, mode, &out),
        Command::Counterexample(args) => spectral::run_counterexample(&args, mode, &out),
        Command::Multid(args) => multid::run(&args, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("obswave: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
