use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use steering_cli::commands::{self, Overrides, EXIT_CONFIG};
use steering_cli::config::{LoadError, PRESET_DIR_ENV};

/// Constrained ship-steering simulator.
///
/// A preset name is looked up in $STEER_PRESET_DIR (as <name>.toml) and
/// then among the built-in presets.
#[derive(Debug, Parser)]
#[command(name = "steer", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one scenario and write telemetry, metrics and a manifest.
    ///
    /// Exit status: 0 completed, 2 guard violation, 3 numeric failure,
    /// 1 config or I/O error.
    Run {
        /// Scenario TOML, run manifest (.json), or preset name.
        config: String,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run a scenario once per reference value and tabulate the results.
    ///
    /// Values that fail the feasibility check are reported and not run.
    /// Exit status is 0 only if every row completed.
    Sweep {
        /// Scenario TOML, run manifest (.json), or preset name.
        config: String,
        /// Comma-separated reference values (tanh or sine amplitude, or
        /// constant heading).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<String>,
        #[arg(long, default_value = "sweep")]
        out_dir: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Check the reference against the rudder limits. Exit 0 iff feasible.
    Check {
        /// Scenario TOML, run manifest (.json), or preset name.
        config: String,
    },
}

#[derive(Debug, clap::Args)]
struct OverrideArgs {
    /// Replace the noise seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replace the step size [s].
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
}

impl From<OverrideArgs> for Overrides {
    fn from(a: OverrideArgs) -> Self {
        Overrides { seed: a.seed, dt: a.dt }
    }
}

fn parse_values(raw: &[String]) -> anyhow::Result<Vec<f64>> {
    raw.iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| anyhow::anyhow!("--values: `{s}`: {e}")))
        .collect()
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Run { config, out_dir, overrides } => {
            commands::run(&config, &out_dir, overrides.into(), &mut out)
        }
        Command::Sweep { config, values, out_dir, overrides } => {
            commands::sweep(&config, &parse_values(&values)?, &out_dir, overrides.into(), &mut out)
        }
        Command::Check { config } => commands::check(&config, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            if matches!(e.downcast_ref::<LoadError>(), Some(LoadError::UnknownPreset { .. })) {
                eprintln!("hint: set {PRESET_DIR_ENV} to a directory of <name>.toml files");
            }
            ExitCode::from(EXIT_CONFIG as u8)
        }
    }
}
