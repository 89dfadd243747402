//! `opswtw score`: the official averaged score of a submission.

use std::path::PathBuf;

use clap::Parser;
use opswtw::scoring::{final_score, parse_submission, Track};
use opswtw::{Instance, Result};

use crate::commands::load_instances;
use crate::config::{write_output, RunHeader};

#[derive(Parser, Debug)]
pub struct Args {
    /// Competition track: 1 (one tour, one instance) or 2 (one tour per
    /// instance and sample).
    #[arg(long)]
    pub track: String,
    #[arg(long)]
    pub submission: PathBuf,
    /// Instance file or directory of instance files.
    #[arg(long)]
    pub instances: PathBuf,
    /// Monte-Carlo samples per instance.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-pair score CSV (`instance_id,sample_id,alpha`).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Team name for `--score-out`.
    #[arg(long)]
    pub team: Option<String>,
    /// Write a `team,score` line for `opswtw rank`.
    #[arg(long)]
    pub score_out: Option<PathBuf>,
}

pub fn run(args: Args, jobs: usize) -> Result<()> {
    let track: Track = args.track.parse()?;
    let named = load_instances(&args.instances)?;
    let instances: Vec<Instance> = named.iter().map(|(_, i)| i.clone()).collect();
    let submission = parse_submission(&args.submission, track, &instances, args.samples)?;
    let result = final_score(&submission, &instances, args.samples, args.seed)?;

    let mut header = RunHeader::new("score");
    header.push("jobs", jobs);
    header.push("track", &args.track);
    header.push("submission", args.submission.display());
    header.push("instances", args.instances.display());
    header.push("samples", args.samples);
    header.push("seed", args.seed);

    if let Some(csv) = &args.csv {
        let mut body = String::from("instance_id,sample_id,alpha\n");
        for (i, j, alpha) in &result.per_pair {
            body.push_str(&format!("{i},{j},{alpha}\n"));
        }
        body.push_str(&format!(
            "# summary score = {:.10} m = {} instances = {}\n",
            result.score(),
            result.m,
            result.instances
        ));
        write_output(csv, &header, &body)?;
    }
    if let (Some(team), Some(path)) = (&args.team, &args.score_out) {
        write_output(path, &header, &format!("{team},{:.10}\n", result.score()))?;
    }

    println!("score = {:.10}", result.score());
    Ok(())
}
