//! Command-line harness: reproducible generation, simulation, solving,
//! scoring and ranking.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opswtw::Error;

#[derive(Parser)]
#[command(
    name = "opswtw",
    about = "Benchmark harness for the orienteering problem with stochastic weights and time windows",
    version
)]
struct Cli {
    /// Worker threads for parallel sections (0 = one per core). Outputs are
    /// identical for any value.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate seeded problem instances.
    Generate(commands::generate::Args),
    /// Monte-Carlo evaluation of a tour on one instance.
    Evaluate(commands::evaluate::Args),
    /// Run a solver on an instance (or a directory of instances).
    Solve(commands::solve::Args),
    /// Official score of a submission over an instance set.
    Score(commands::score::Args),
    /// Rank team score files into a leaderboard.
    Rank(commands::rank::Args),
    /// Brute-force best tour of a small instance.
    Oracle(commands::oracle::Args),
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Exhausted => 3,
        Error::Io { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        // deterministic outputs do not depend on the pool size; this only
        // bounds resource usage
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let result = match cli.command {
        Command::Generate(args) => commands::generate::run(args, cli.jobs),
        Command::Evaluate(args) => commands::evaluate::run(args, cli.jobs),
        Command::Solve(args) => commands::solve::run(args, cli.jobs),
        Command::Score(args) => commands::score::run(args, cli.jobs),
        Command::Rank(args) => commands::rank::run(args, cli.jobs),
        Command::Oracle(args) => commands::oracle::run(args, cli.jobs),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
