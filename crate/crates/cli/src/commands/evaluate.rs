//! `opswtw evaluate`: Monte-Carlo evaluation of one submitted tour.

use std::path::PathBuf;

use clap::Parser;
use opswtw::instance::read_instance;
use opswtw::rng::sample_stream;
use opswtw::scoring::{evaluate_monte_carlo, parse_submission, Track};
use opswtw::sim::check_solution;
use opswtw::Result;

use crate::config::{write_output, RunHeader};

#[derive(Parser, Debug)]
pub struct Args {
    #[arg(long)]
    pub instance: PathBuf,
    /// Submission file holding one tour.
    #[arg(long)]
    pub tours: PathBuf,
    /// Monte-Carlo samples.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-sample score CSV (`instance_id,sample_id,alpha`).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Per-step trace CSV of every sample
    /// (`sample_id,node,arrival,departure,reward,penalty`).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

pub fn run(args: Args, jobs: usize) -> Result<()> {
    let inst = read_instance(&args.instance)?;
    let submission = parse_submission(&args.tours, Track::One, std::slice::from_ref(&inst), 1)?;
    let tour = &submission.tours[0];
    let report = evaluate_monte_carlo(&inst, tour, args.samples, args.seed)?;

    let mut header = RunHeader::new("evaluate");
    header.push("jobs", jobs);
    header.push("instance", args.instance.display());
    header.push("tours", args.tours.display());
    header.push("samples", args.samples);
    header.push("seed", args.seed);

    if let Some(csv) = &args.csv {
        let mut body = String::from("instance_id,sample_id,alpha\n");
        for (j, alpha) in report.alphas.iter().enumerate() {
            body.push_str(&format!("0,{j},{alpha}\n"));
        }
        body.push_str(&format!(
            "# summary mean = {:.10} m = {} instances = 1\n",
            report.mean(),
            report.m()
        ));
        write_output(csv, &header, &body)?;
    }

    if let Some(trace) = &args.trace {
        let mut body = String::from("sample_id,node,arrival,departure,reward,penalty\n");
        for j in 0..args.samples as u64 {
            let mut rng = sample_stream(args.seed, 0, j);
            let outcome = check_solution(&inst, tour, &mut rng)?;
            for step in &outcome.per_node {
                body.push_str(&format!(
                    "{j},{},{},{},{},{}\n",
                    step.node, step.arrival, step.departure, step.reward, step.penalty
                ));
            }
        }
        write_output(trace, &header, &body)?;
    }

    println!(
        "mean = {:.10} over {} samples (std {:.6})",
        report.mean(),
        report.m(),
        report.std()
    );
    Ok(())
}
