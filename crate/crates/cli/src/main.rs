mod commands;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use actfloor_server::ServerConfig;
use clap::{Parser, Subcommand};

use crate::run::{input, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "actfloor",
    version,
    about = "Activity-guided floorplan pipeline"
)]
struct Cli {
    /// Base seed; defaults to the config file's seed, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for batch commands.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Furnish every floorplan of a dataset and synthesize its activity map.
    Simulate(commands::simulate::Args),
    /// Generate a floorplan for a boundary and activity map.
    Generate(commands::generate::Args),
    /// Vectorize a category image.
    Vectorize(commands::vectorize::Args),
    /// Compare predicted floorplans against ground truth.
    Eval(commands::eval::Args),
    /// Tabulate Elo ratings from a match log.
    Elo(commands::elo::Args),
    /// Write procedurally generated floorplans.
    Fixtures(commands::fixtures::Args),
    /// Run the HTTP service.
    Serve(commands::serve::Args),
}

/// Options shared by every subcommand after config resolution.
pub struct Common {
    pub seed: u64,
    pub config: ServerConfig,
}

fn run(cli: Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(p) => ServerConfig::load(p).map_err(input)?,
        None => ServerConfig::default(),
    }
    .with_env();
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(input)?;
    }
    let common = Common {
        seed: cli.seed.unwrap_or(config.seed),
        config,
    };
    match cli.command {
        Command::Simulate(a) => commands::simulate::run(&common, a),
        Command::Generate(a) => commands::generate::run(&common, a),
        Command::Vectorize(a) => commands::vectorize::run(&common, a),
        Command::Eval(a) => commands::eval::run(&common, a),
        Command::Elo(a) => commands::elo::run(&common, a),
        Command::Fixtures(a) => commands::fixtures::run(&common, a),
        Command::Serve(a) => commands::serve::run(common, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("actfloor: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
