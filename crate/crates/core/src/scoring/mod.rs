//! Official scoring: per-sample tour scores, Monte-Carlo expected reward,
//! the averaged final score, submission handling, team ranking, and a
//! brute-force oracle for small instances.

mod eval;
mod oracle;
mod submission;

pub use eval::CrnEvaluator;
pub use oracle::{brute_force_best_tour, enumerate_prefixes, pad_prefix, OracleResult};
pub use submission::{
    parse_submission, parse_submission_str, write_submission, Submission, Track,
};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fixed::Centi;
use crate::instance::Instance;
use crate::rng::sample_stream;
use crate::sim::{check_solution, EtaSource};

/// Per-sample tour score: the sum of prizes and penalties collected before
/// (and at) the return to the depot. Definitionally equal to the simulator's
/// total reward.
pub fn tour_score(inst: &Instance, tour: &[usize], eta: &mut impl EtaSource) -> Result<Centi> {
    Ok(check_solution(inst, tour, eta)?.total_reward)
}

/// Monte-Carlo estimate of a tour's expected score on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    /// Per-sample scores, in sample order.
    pub alphas: Vec<Centi>,
}

impl ScoreReport {
    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    pub fn sum(&self) -> Centi {
        self.alphas.iter().copied().sum()
    }

    /// Arithmetic mean of the per-sample scores.
    pub fn mean(&self) -> f64 {
        self.sum().raw() as f64 / (100.0 * self.alphas.len() as f64)
    }

    /// Standard deviation of the per-sample scores.
    pub fn std(&self) -> f64 {
        let mean = self.mean();
        let var = self
            .alphas
            .iter()
            .map(|a| (a.as_f64() - mean).powi(2))
            .sum::<f64>()
            / self.alphas.len() as f64;
        var.sqrt()
    }
}

/// Evaluates `tour` on `m` derived noise streams of `base_seed`.
///
/// Sample `j` uses the stream `(base_seed, instance 0, j)`, so two tours
/// evaluated under the same seed see common random numbers. Samples run in
/// parallel; the per-sample scores are exact fixed-point values collected in
/// sample order, so the result does not depend on scheduling.
pub fn evaluate_monte_carlo(
    inst: &Instance,
    tour: &[usize],
    m: usize,
    base_seed: u64,
) -> Result<ScoreReport> {
    if m == 0 {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    crate::sim::validate_tour(inst, tour)?;
    let alphas = (0..m as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = sample_stream(base_seed, 0, j);
            check_solution(inst, tour, &mut rng)
                .expect("tour validated above")
                .total_reward
        })
        .collect();
    Ok(ScoreReport { alphas })
}

/// Final score of a submission over an instance set.
#[derive(Debug, Clone, PartialEq)]
pub struct FinalScore {
    /// `(instance index, sample index, score)` per evaluated pair.
    pub per_pair: Vec<(usize, usize, Centi)>,
    pub m: usize,
    pub instances: usize,
}

impl FinalScore {
    /// `sum of scores / (m * |I|)`.
    pub fn score(&self) -> f64 {
        let sum: Centi = self.per_pair.iter().map(|&(_, _, a)| a).sum();
        sum.raw() as f64 / (100.0 * self.per_pair.len() as f64)
    }
}

/// Scores a submission: track 1 evaluates its single tour on `m` samples of
/// one instance; track 2 evaluates one tour per (instance, sample) pair,
/// instance-major. Sample `j` of instance `i` draws from the derived stream
/// `(base_seed, i, j)`.
pub fn final_score(
    submission: &Submission,
    instances: &[Instance],
    m: usize,
    base_seed: u64,
) -> Result<FinalScore> {
    if m == 0 || instances.is_empty() {
        return Err(Error::InvalidInput(
            "need at least one sample and one instance".into(),
        ));
    }
    match submission.track {
        Track::One => {
            if instances.len() != 1 {
                return Err(Error::InvalidInput(format!(
                    "track 1 scores a single instance, got {}",
                    instances.len()
                )));
            }
            if submission.tours.len() != 1 {
                return Err(Error::InvalidInput(format!(
                    "track 1 submission must hold one tour, got {}",
                    submission.tours.len()
                )));
            }
        }
        Track::Two => {
            let expect = instances.len() * m;
            if submission.tours.len() != expect {
                return Err(Error::InvalidInput(format!(
                    "track 2 needs {expect} tours ({} instances x {m} samples), got {}",
                    instances.len(),
                    submission.tours.len()
                )));
            }
        }
    }

    let pairs: Vec<(usize, usize)> = (0..instances.len())
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .collect();
    let per_pair: Vec<(usize, usize, Centi)> = pairs
        .into_par_iter()
        .map(|(i, j)| {
            let tour = match submission.track {
                Track::One => &submission.tours[0],
                Track::Two => &submission.tours[i * m + j],
            };
            let mut rng = sample_stream(base_seed, i as u64, j as u64);
            let alpha = check_solution(&instances[i], tour, &mut rng)
                .map(|o| o.total_reward)
                .map_err(|e| Error::InvalidInput(format!("instance {i} sample {j}: {e}")))?;
            Ok((i, j, alpha))
        })
        .collect::<Result<_>>()?;

    Ok(FinalScore {
        per_pair,
        m,
        instances: instances.len(),
    })
}

/// One leaderboard row.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedTeam {
    /// Competition-style rank: exact ties share a rank and the next distinct
    /// score skips ahead (1, 1, 1, 4, ...).
    pub rank: usize,
    pub team: String,
    pub score: f64,
}

/// Ranks teams by score in descending order; the sort is stable, so tied
/// teams keep their input order.
pub fn rank_teams(entries: &[(String, f64)]) -> Vec<RankedTeam> {
    let mut sorted: Vec<(String, f64)> = entries.to_vec();
    sorted.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<RankedTeam> = Vec::with_capacity(sorted.len());
    for (idx, (team, score)) in sorted.into_iter().enumerate() {
        let rank = match out.last() {
            Some(prev) if prev.score == score => prev.rank,
            _ => idx + 1,
        };
        out.push(RankedTeam { rank, team, score });
    }
    out
}

#[cfg(test)]
mod tests;
