use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gridevo_cli::{run, Command, Overrides};

#[derive(Parser)]
#[command(
    name = "gridevo",
    version,
    about = "Temporal analytics for year-stamped grid asset records"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Check the record files and print every violation
    Validate(RunArgs),
    /// Per-year metric panel (tidy and wide CSV)
    Panel(RunArgs),
    /// Loop and star motif counts and shares per year
    Motifs(RunArgs),
    /// Line lifetimes, change rates and underperformers
    Temporal(RunArgs),
    /// Random, small-world and ring-lattice reference ensembles
    Baselines(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file (`key = value` lines)
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    voltage_floor: Option<u32>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    threshold: Option<f64>,
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Sub::Validate(a) => (Command::Validate, a),
        Sub::Panel(a) => (Command::Panel, a),
        Sub::Motifs(a) => (Command::Motifs, a),
        Sub::Temporal(a) => (Command::Temporal, a),
        Sub::Baselines(a) => (Command::Baselines, a),
    };
    let overrides = Overrides {
        voltage_floor_kv: args.voltage_floor,
        gamma: args.gamma,
        seed: args.seed,
        window: args.window,
        threshold: args.threshold,
        out: args.out,
    };
    match run(command, &args.config, &overrides, &mut std::io::stdout()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
