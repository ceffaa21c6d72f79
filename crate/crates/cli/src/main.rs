//! `dicke`: presets, sweeps and approximation checks for three qubits
//! coupled to one oscillator.
//!
//! Exit status: 0 success, 2 bad arguments, 3 truncation could not be
//! certified, 4 I/O failure, 1 any other numerical failure.

mod output;
mod presets;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dicke_core::Error;

use output::Format;
use run::{compare, parse_sweep, run, ExperimentConfig, Overrides, UsageError, DEFAULT_COMPARE_LEVELS};

const EXIT_NUMERICAL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_TRUNCATION: u8 = 3;
const EXIT_IO: u8 = 4;

#[derive(Parser)]
#[command(name = "dicke", version, about = "Three qubits ultrastrongly coupled to a harmonic oscillator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a figure preset, or `custom` with explicit parameters.
    Run(RunArgs),
    /// Tabulate exact levels against both adiabatic approximations.
    Compare(CompareArgs),
    /// List the available presets.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// Preset name (fig3a … fig9c, or custom).
    #[arg(value_name = "PRESET", conflicts_with = "preset")]
    preset_name: Option<String>,
    #[arg(long)]
    preset: Option<String>,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CompareArgs {
    /// Number of levels to compare.
    #[arg(long, default_value_t = DEFAULT_COMPARE_LEVELS)]
    k: usize,
    /// File stem of the discrepancy tables.
    #[arg(long, default_value = "compare")]
    name: String,
    #[command(flatten)]
    params: ParamArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ParamArgs {
    /// Qubit tunnelling splitting Δ.
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Qubit bias ε.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "theta")]
    epsilon: Option<f64>,
    /// Oscillator frequency.
    #[arg(long)]
    w0: Option<f64>,
    /// Mixing angle; sets ε = Δ·tan θ.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Single coupling strength λ.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Fixed Fock truncation (skips certification).
    #[arg(long)]
    nmax: Option<usize>,
    /// Coupling sweep `min:max:steps`.
    #[arg(long, value_parser = parse_sweep)]
    sweep: Option<(f64, f64, usize)>,
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory.
    #[arg(long, env = "DICKE_OUT_DIR", default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

impl ParamArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            delta: self.delta,
            epsilon: self.epsilon,
            w0: self.w0,
            theta: self.theta,
            lambda: self.lambda,
            n_max: self.nmax,
            sweep: self.sweep,
        }
    }
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TruncationInfeasible { .. } => EXIT_TRUNCATION,
        Error::Io(_) => EXIT_IO,
        Error::InvalidParameter(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn preset_or_usage(name: &str) -> Result<presets::Preset, Failure> {
    presets::find(name).ok_or_else(|| {
        Failure::Usage(format!("unknown preset '{name}'; available: {}", presets::names().join(", ")))
    })
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Presets => {
            for name in presets::names() {
                println!("{name}");
            }
        }
        Command::Run(args) => {
            let name = args
                .preset_name
                .or(args.preset)
                .ok_or_else(|| Failure::Usage("a preset is required (positional or --preset)".into()))?;
            let preset = preset_or_usage(&name)?;
            let c = &args.common;
            let config = ExperimentConfig::resolve(preset, &args.params.overrides(), c.out.clone(), c.format, c.jobs)?;
            for file in run(&config)? {
                println!("{}", config.out_dir.join(file).display());
            }
        }
        Command::Compare(args) => {
            if args.k == 0 {
                return Err(Failure::Usage("--k must be at least 1".into()));
            }
            let preset = preset_or_usage("custom")?;
            let mut overrides = args.params.overrides();
            if overrides.sweep.is_none() && overrides.lambda.is_none() {
                overrides.sweep = Some((0.0, 1.0, 11));
            }
            let c = &args.common;
            let config = ExperimentConfig::resolve(preset, &overrides, c.out.clone(), c.format, c.jobs)?;
            let summary = compare(&config, &args.name, args.k)?;
            println!("max |E_exact - E_fast|/w0 = {:.3e}", summary.max_fast);
            println!("max |E0_exact - E0_slow|/w0 = {:.3e}", summary.max_slow);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
