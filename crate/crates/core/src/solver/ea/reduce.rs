//! Dimensionality reduction: drop nodes that single-node tours already show
//! to be (almost) never feasible.

use super::cache::EvalCache;

/// Outcome of the reduction pass.
#[derive(Debug, Clone, PartialEq)]
pub struct ReduceReport {
    /// Non-depot nodes kept for the search, ascending.
    pub active: Vec<usize>,
    /// Non-depot nodes removed, ascending.
    pub removed: Vec<usize>,
}

/// Evaluates the tour that visits exactly node `i` for every non-depot `i`
/// at `reps` samples and removes nodes whose infeasible fraction reaches
/// `threshold`. The evaluations stay in the cache, so the evolutionary run
/// reuses them.
pub fn reduce_dimension(cache: &mut EvalCache, reps: usize, threshold: f64) -> ReduceReport {
    let n = cache.instance().n();
    let mut active = Vec::new();
    let mut removed = Vec::new();
    for node in 2..=n {
        let (entry, _) = cache.estimate(&[node], reps);
        if entry.infeasible_fraction() >= threshold {
            removed.push(node);
        } else {
            active.push(node);
        }
    }
    ReduceReport { active, removed }
}
