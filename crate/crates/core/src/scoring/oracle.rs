//! Brute-force oracle: enumerate every effective prefix of a small instance
//! and return the best under common random numbers. Ground truth for solver
//! tests.

use rayon::prelude::*;

use super::CrnEvaluator;
use crate::error::{Error, Result};
use crate::fixed::Centi;
use crate::instance::{Instance, DEPOT};

/// Largest instance the oracle accepts; the enumeration is factorial.
pub const MAX_ORACLE_NODES: usize = 9;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Best tour, padded to submission shape (length `n + 1`).
    pub tour: Vec<usize>,
    /// Its mean score over the `fidelity` common samples.
    pub mean: f64,
    /// Exact score sum behind `mean`.
    pub sum: Centi,
    pub fidelity: usize,
    /// Number of effective prefixes enumerated.
    pub prefixes: usize,
}

/// All effective prefixes of an `n`-node instance: every ordered subset of
/// the non-depot nodes, each terminated by the return to the depot. The
/// order is deterministic (depth-first, ascending node ids).
pub fn enumerate_prefixes(n: usize) -> Vec<Vec<usize>> {
    fn rec(seq: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let mut prefix = seq.clone();
        prefix.push(DEPOT);
        out.push(prefix);
        for node in 2..used.len() {
            if !used[node] {
                used[node] = true;
                seq.push(node);
                rec(seq, used, out);
                seq.pop();
                used[node] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

/// Pads an effective prefix to submission shape: `[1, prefix..., unvisited
/// nodes in id order]`.
pub fn pad_prefix(n: usize, prefix: &[usize]) -> Vec<usize> {
    let mut tour = Vec::with_capacity(n + 1);
    tour.push(DEPOT);
    tour.extend_from_slice(prefix);
    let mut seen = vec![false; n + 1];
    for &v in prefix {
        seen[v] = true;
    }
    for node in 2..=n {
        if !seen[node] {
            tour.push(node);
        }
    }
    tour
}

/// Enumerates all effective prefixes, scores each on the same `fidelity`
/// samples, and returns the argmax (ties break toward the earlier
/// enumeration position, so the result is independent of parallelism).
pub fn brute_force_best_tour(
    inst: &Instance,
    fidelity: usize,
    base_seed: u64,
) -> Result<OracleResult> {
    let n = inst.n();
    if n > MAX_ORACLE_NODES {
        return Err(Error::InvalidInput(format!(
            "oracle enumerates at most {MAX_ORACLE_NODES} nodes, got {n}"
        )));
    }
    if fidelity == 0 {
        return Err(Error::InvalidInput("fidelity must be positive".into()));
    }

    let mut eval = CrnEvaluator::new(inst, base_seed);
    eval.materialize(fidelity);
    let prefixes = enumerate_prefixes(n);

    let best = prefixes
        .par_iter()
        .enumerate()
        .map(|(idx, prefix)| {
            let sum: i64 = (0..fidelity)
                .map(|j| eval.eval_sample(prefix, j).0.raw())
                .sum();
            (sum, idx)
        })
        .reduce(
            || (i64::MIN, usize::MAX),
            |a, b| {
                // higher sum wins; equal sums resolve to the earlier prefix
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let (sum, idx) = best;
    let prefix = &prefixes[idx];
    Ok(OracleResult {
        tour: pad_prefix(n, prefix),
        mean: sum as f64 / (100.0 * fidelity as f64),
        sum: Centi(sum),
        fidelity,
        prefixes: prefixes.len(),
    })
}
