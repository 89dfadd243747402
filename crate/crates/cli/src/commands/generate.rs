//! `opswtw generate`: batches of seeded instances.

use std::path::PathBuf;

use clap::Parser;
use opswtw::instance::{generate_instance, write_instance, GenParams};
use opswtw::{Error, Result};

use crate::config::{write_output, RunHeader};

#[derive(Parser, Debug)]
pub struct Args {
    /// Output directory for instance files and the manifest.
    #[arg(long)]
    pub out: PathBuf,
    /// Instance sizes, comma-separated.
    #[arg(long, value_delimiter = ',', default_values_t = vec![20usize, 50, 100, 200])]
    pub sizes: Vec<usize>,
    /// Instances per size.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Time-window size (20, 40, 60, 80 or 100).
    #[arg(long, default_value_t = 60)]
    pub w: i64,
    /// Root seed; instance `i` of size `n` uses seed `seed + i` within its
    /// own size bucket.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run(args: Args, jobs: usize) -> Result<()> {
    std::fs::create_dir_all(&args.out).map_err(|e| Error::Io {
        path: args.out.clone(),
        source: e,
    })?;

    let mut header = RunHeader::new("generate");
    header.push("jobs", jobs);
    header.push(
        "sizes",
        args.sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    header.push("count", args.count);
    header.push("w", args.w);
    header.push("seed", args.seed);

    let mut files = Vec::new();
    for &n in &args.sizes {
        for i in 0..args.count as u64 {
            let seed = args.seed + i;
            let inst = generate_instance(&GenParams::new(n, args.w), seed)?;
            let name = format!("instance_n{n:04}_s{seed:08}.txt");
            let path = args.out.join(&name);
            write_instance(&inst, &path)?;
            files.push(name);
        }
    }

    let body = files.join("\n") + "\n";
    write_output(&args.out.join("manifest.cfg"), &header, &body)?;
    println!("generated {} instances into {}", files.len(), args.out.display());
    Ok(())
}
