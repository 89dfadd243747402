//! Submission files: one tour per line as space-separated node ids.
//!
//! Track 1 holds a single tour for a single instance; track 2 holds one tour
//! per (instance, sample) pair, ordered instance-major then by sample index.
//! Lines starting with `#` carry run metadata and are skipped.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::sim::validate_tour;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Track {
    One,
    Two,
}

impl std::str::FromStr for Track {
    type Err = Error;
    fn from_str(s: &str) -> Result<Track> {
        match s {
            "1" => Ok(Track::One),
            "2" => Ok(Track::Two),
            other => Err(Error::InvalidInput(format!(
                "unknown track `{other}`, expected 1 or 2"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submission {
    pub track: Track,
    pub tours: Vec<Vec<usize>>,
}

pub fn write_submission(tours: &[Vec<usize>], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for tour in tours {
        let line: Vec<String> = tour.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Reads and validates a submission against the instance set.
///
/// `m` is the number of Monte-Carlo samples per instance (track 2 expects
/// `instances.len() * m` tours; track 1 ignores it and expects one tour).
pub fn parse_submission(
    path: impl AsRef<Path>,
    track: Track,
    instances: &[Instance],
    m: usize,
) -> Result<Submission> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_submission_str(&path.display().to_string(), &text, track, instances, m)
}

/// Parses submission contents; `name` is used in error messages.
pub fn parse_submission_str(
    name: &str,
    text: &str,
    track: Track,
    instances: &[Instance],
    m: usize,
) -> Result<Submission> {
    if instances.is_empty() {
        return Err(Error::InvalidInput("no instances supplied".into()));
    }
    let expected = match track {
        Track::One => 1,
        Track::Two => instances.len() * m,
    };

    let mut tours = Vec::with_capacity(expected);
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tour_idx = tours.len();
        if tour_idx >= expected {
            return Err(Error::parse(
                name,
                line_no,
                format!("more than the expected {expected} tours"),
            ));
        }
        let inst = match track {
            Track::One => &instances[0],
            Track::Two => &instances[tour_idx / m],
        };
        let mut tour = Vec::with_capacity(inst.n() + 1);
        for field in trimmed.split_whitespace() {
            let node: usize = field.parse().map_err(|_| {
                Error::parse(name, line_no, format!("non-numeric node id `{field}`"))
            })?;
            tour.push(node);
        }
        validate_tour(inst, &tour).map_err(|e| Error::parse(name, line_no, e.to_string()))?;
        tours.push(tour);
    }

    if tours.len() != expected {
        return Err(Error::parse(
            name,
            text.lines().count() + 1,
            format!("expected {expected} tours, found {}", tours.len()),
        ));
    }
    Ok(Submission { track, tours })
}
