//! `opswtw rank`: leaderboard from team score files.

use std::path::PathBuf;

use clap::Parser;
use opswtw::scoring::rank_teams;
use opswtw::{Error, Result};

use crate::config::{write_output, RunHeader};

#[derive(Parser, Debug)]
pub struct Args {
    /// Score files; each non-comment line is `team,score`.
    #[arg(required = true)]
    pub scores: Vec<PathBuf>,
    /// Write the leaderboard here as well.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: Args, jobs: usize) -> Result<()> {
    let mut entries: Vec<(String, f64)> = Vec::new();
    for path in &args.scores {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.clone(),
            source: e,
        })?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| Error::Parse {
                file: path.display().to_string(),
                line: idx + 1,
                msg: msg.to_string(),
            };
            let (team, score) = line
                .split_once(',')
                .ok_or_else(|| bad("expected `team,score`"))?;
            let score: f64 = score
                .trim()
                .parse()
                .map_err(|_| bad("non-numeric score"))?;
            if !score.is_finite() {
                return Err(bad("non-finite score"));
            }
            entries.push((team.trim().to_string(), score));
        }
    }

    let ranked = rank_teams(&entries);
    let team_width = ranked
        .iter()
        .map(|r| r.team.len())
        .max()
        .unwrap_or(4)
        .max(4);
    let mut table = format!("{:>4}  {:<team_width$}  {}\n", "rank", "team", "score");
    for row in &ranked {
        table.push_str(&format!(
            "{:>4}  {:<team_width$}  {}\n",
            row.rank, row.team, row.score
        ));
    }
    print!("{table}");

    if let Some(out) = &args.out {
        let mut header = RunHeader::new("rank");
        header.push("jobs", jobs);
        for path in &args.scores {
            header.push("scores", path.display());
        }
        write_output(out, &header, &table)?;
    }
    Ok(())
}
