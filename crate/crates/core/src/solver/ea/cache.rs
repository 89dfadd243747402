//! Multi-fidelity evaluation cache.
//!
//! Keys are the visited node sequences (the phenotype); values accumulate
//! common-random-number samples. Requesting a fidelity at or below what is
//! cached issues zero simulator calls; requesting more runs exactly the
//! missing samples, so sample `j` of a tour is evaluated at most once ever.

use indexmap::IndexMap;

use crate::fixed::Centi;
use crate::instance::{Instance, DEPOT};
use crate::scoring::CrnEvaluator;

/// Accumulated evaluation state of one tour.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheEntry {
    /// Exact sum of per-sample scores over the first `count` samples.
    pub sum: Centi,
    /// Samples evaluated so far (the fidelity reached).
    pub count: usize,
    /// Infeasible samples among them.
    pub infeasible: u32,
}

impl CacheEntry {
    pub fn mean(&self) -> f64 {
        self.sum.raw() as f64 / (100.0 * self.count as f64)
    }

    pub fn infeasible_fraction(&self) -> f64 {
        self.infeasible as f64 / self.count as f64
    }
}

/// Cache of tour evaluations backed by a common-random-number evaluator.
pub struct EvalCache<'a> {
    eval: CrnEvaluator<'a>,
    entries: IndexMap<Vec<usize>, CacheEntry>,
}

impl<'a> EvalCache<'a> {
    pub fn new(inst: &'a Instance, base_seed: u64) -> Self {
        EvalCache {
            eval: CrnEvaluator::new(inst, base_seed),
            entries: IndexMap::new(),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.eval.instance()
    }

    /// Simulator calls issued through this cache so far.
    pub fn sim_calls(&self) -> u64 {
        self.eval.sim_calls()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, visited: &[usize]) -> Option<&CacheEntry> {
        self.entries.get(visited)
    }

    /// Entries in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &CacheEntry)> {
        self.entries.iter()
    }

    /// Mean score of `visited` at `fidelity` samples, topping the entry up
    /// with exactly the missing samples. The flag reports whether any new
    /// simulator calls were issued.
    pub fn estimate(&mut self, visited: &[usize], fidelity: usize) -> (CacheEntry, bool) {
        debug_assert!(fidelity > 0);
        debug_assert!(visited.iter().all(|&v| v != DEPOT));
        let current = self
            .entries
            .get(visited)
            .copied()
            .unwrap_or(CacheEntry {
                sum: Centi::ZERO,
                count: 0,
                infeasible: 0,
            });
        if current.count >= fidelity {
            return (current, false);
        }
        let mut prefix = visited.to_vec();
        prefix.push(DEPOT);
        let (sum, infeasible) = self.eval.eval_range(&prefix, current.count, fidelity);
        let updated = CacheEntry {
            sum: current.sum + sum,
            count: fidelity,
            infeasible: current.infeasible + infeasible,
        };
        self.entries.insert(visited.to_vec(), updated);
        (updated, true)
    }

    /// The `k` best entries by mean (stable: earlier-inserted entries win
    /// exact ties), as (visited sequence, entry) pairs.
    pub fn top_k(&self, k: usize) -> Vec<(Vec<usize>, CacheEntry)> {
        let mut all: Vec<(Vec<usize>, CacheEntry)> = self
            .entries
            .iter()
            .map(|(t, e)| (t.clone(), *e))
            .collect();
        all.sort_by(|a, b| {
            // exact comparison of means via cross-multiplied integer sums
            let lhs = a.1.sum.raw() as i128 * b.1.count as i128;
            let rhs = b.1.sum.raw() as i128 * a.1.count as i128;
            rhs.cmp(&lhs)
        });
        all.truncate(k);
        all
    }

    /// Best entry by mean, if any.
    pub fn best(&self) -> Option<(Vec<usize>, CacheEntry)> {
        self.top_k(1).into_iter().next()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_instance, GenParams};
    use crate::rng::sample_stream;
    use crate::sim::check_solution;

    #[test]
    fn repeated_requests_issue_no_calls() {
        let inst = generate_instance(&GenParams::new(6, 40), 1).unwrap();
        let mut cache = EvalCache::new(&inst, 7);
        let (a, fresh_a) = cache.estimate(&[2, 3], 50);
        assert!(fresh_a);
        assert_eq!(cache.sim_calls(), 50);
        let (b, fresh_b) = cache.estimate(&[2, 3], 50);
        assert!(!fresh_b);
        assert_eq!(cache.sim_calls(), 50);
        assert_eq!(a, b);
        // lower fidelity also answered from cache
        let (_, fresh_c) = cache.estimate(&[2, 3], 10);
        assert!(!fresh_c);
        assert_eq!(cache.sim_calls(), 50);
    }

    #[test]
    fn topping_up_runs_exactly_the_missing_samples() {
        let inst = generate_instance(&GenParams::new(6, 40), 1).unwrap();
        let mut cache = EvalCache::new(&inst, 7);
        cache.estimate(&[4], 1);
        assert_eq!(cache.sim_calls(), 1);
        cache.estimate(&[4], 10);
        assert_eq!(cache.sim_calls(), 10);
        let (entry, _) = cache.estimate(&[4], 10);
        assert_eq!(entry.count, 10);
    }

    #[test]
    fn cached_means_replay_from_derived_streams() {
        let inst = generate_instance(&GenParams::new(5, 20), 3).unwrap();
        let mut cache = EvalCache::new(&inst, 99);
        let visited = [3, 2, 5];
        let (entry, _) = cache.estimate(&visited, 37);
        let mut tour = vec![DEPOT];
        tour.extend_from_slice(&visited);
        tour.push(DEPOT);
        tour.push(4);
        let mut sum = Centi::ZERO;
        let mut infeasible = 0u32;
        for j in 0..37 {
            let mut rng = sample_stream(99, 0, j);
            let out = check_solution(&inst, &tour, &mut rng).unwrap();
            sum += out.total_reward;
            infeasible += u32::from(!out.feasible);
        }
        assert_eq!(entry.sum, sum);
        assert_eq!(entry.infeasible, infeasible);
    }

    #[test]
    fn top_k_orders_by_mean() {
        let inst = generate_instance(&GenParams::new(6, 40), 1).unwrap();
        let mut cache = EvalCache::new(&inst, 7);
        for visited in [vec![2], vec![3], vec![2, 3], vec![5, 4]] {
            cache.estimate(&visited, 64);
        }
        let top = cache.top_k(4);
        for w in top.windows(2) {
            assert!(w[0].1.mean() >= w[1].1.mean());
        }
    }
}
