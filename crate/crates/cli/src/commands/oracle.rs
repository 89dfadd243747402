//! `opswtw oracle`: exhaustive ground truth for small instances.

use std::path::PathBuf;

use clap::Parser;
use opswtw::instance::read_instance;
use opswtw::scoring::brute_force_best_tour;
use opswtw::Result;

use crate::commands::tour_line;
use crate::config::{write_output, RunHeader};

#[derive(Parser, Debug)]
pub struct Args {
    #[arg(long)]
    pub instance: PathBuf,
    /// Common-random-number samples per enumerated tour.
    #[arg(long, default_value_t = 10_000)]
    pub fidelity: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the best tour as a one-line submission.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: Args, jobs: usize) -> Result<()> {
    let inst = read_instance(&args.instance)?;
    let result = brute_force_best_tour(&inst, args.fidelity, args.seed)?;
    println!(
        "best mean = {:.10} over {} prefixes at fidelity {}",
        result.mean, result.prefixes, result.fidelity
    );
    println!("tour: {}", tour_line(&result.tour));

    if let Some(out) = &args.out {
        let mut header = RunHeader::new("oracle");
        header.push("jobs", jobs);
        header.push("instance", args.instance.display());
        header.push("fidelity", args.fidelity);
        header.push("seed", args.seed);
        write_output(out, &header, &(tour_line(&result.tour) + "\n"))?;
    }
    Ok(())
}
