//! Common-random-number evaluation with precomputed noise rows.
//!
//! Sample `j`'s noise stream is materialized once as a row of `n + 1` noise
//! factors (no tour traverses more edges than that), so repeated evaluation
//! of many tours against the same samples is pure arithmetic. The `k`-th
//! traversal of any tour consumes the `k`-th factor of the row — exactly
//! what a fresh derived stream would have produced, so table evaluation and
//! direct simulation agree bit for bit.

use rayon::prelude::*;

use crate::fixed::Centi;
use crate::instance::Instance;
use crate::rng::sample_stream;
use crate::sim::{simulate_prefix, EtaSource, SliceEta};

const PAR_THRESHOLD: usize = 512;

/// Evaluator holding the growing noise table for one instance and base seed.
pub struct CrnEvaluator<'a> {
    inst: &'a Instance,
    base_seed: u64,
    rows: Vec<Vec<i64>>,
    sim_calls: u64,
}

impl<'a> CrnEvaluator<'a> {
    /// Uses instance id 0 in the stream derivation, matching
    /// single-instance Monte-Carlo evaluation.
    pub fn new(inst: &'a Instance, base_seed: u64) -> Self {
        CrnEvaluator {
            inst,
            base_seed,
            rows: Vec::new(),
            sim_calls: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed
    }

    /// Total simulator calls issued so far (one per tour-sample evaluation).
    pub fn sim_calls(&self) -> u64 {
        self.sim_calls
    }

    /// Materializes the first `m` noise rows without evaluating anything.
    pub fn materialize(&mut self, m: usize) {
        self.ensure_rows(m);
    }

    fn ensure_rows(&mut self, m: usize) {
        let width = self.inst.n() + 1;
        let have = self.rows.len();
        if have >= m {
            return;
        }
        let seed = self.base_seed;
        let mut fresh: Vec<Vec<i64>> = (have as u64..m as u64)
            .into_par_iter()
            .map(|j| {
                let mut rng = sample_stream(seed, 0, j);
                (0..width).map(|k| rng.next_eta(0, k)).collect()
            })
            .collect();
        self.rows.append(&mut fresh);
    }

    /// Evaluates a tour prefix (nodes after the leading depot, ending at the
    /// depot) on samples `from..to`; returns the score sum and the number of
    /// infeasible samples.
    pub fn eval_range(&mut self, prefix: &[usize], from: usize, to: usize) -> (Centi, u32) {
        debug_assert!(from <= to);
        self.ensure_rows(to);
        self.sim_calls += (to - from) as u64;
        let inst = self.inst;
        let rows = &self.rows[from..to];
        let one = |row: &Vec<i64>| {
            let (reward, feasible) = simulate_prefix(inst, prefix, &mut SliceEta::new(row));
            (reward.raw(), u32::from(!feasible))
        };
        let (sum, infeasible) = if to - from >= PAR_THRESHOLD {
            rows.par_iter()
                .map(one)
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
        } else {
            rows.iter()
                .map(one)
                .fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
        };
        (Centi(sum), infeasible)
    }

    /// Mean score of a prefix over the first `fidelity` samples.
    pub fn mean(&mut self, prefix: &[usize], fidelity: usize) -> f64 {
        let (sum, _) = self.eval_range(prefix, 0, fidelity);
        sum.raw() as f64 / (100.0 * fidelity as f64)
    }

    /// Read-only evaluation of one sample (rows must already exist).
    pub fn eval_sample(&self, prefix: &[usize], j: usize) -> (Centi, bool) {
        simulate_prefix(self.inst, prefix, &mut SliceEta::new(&self.rows[j]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::evaluate_monte_carlo;
    use crate::testutil::sample_instance;

    #[test]
    fn table_matches_direct_simulation() {
        let inst = sample_instance();
        let mut eval = CrnEvaluator::new(&inst, 123);
        let tour = vec![1, 2, 3, 4, 1];
        let report = evaluate_monte_carlo(&inst, &tour, 200, 123).unwrap();
        let (sum, _) = eval.eval_range(&[2, 3, 4, 1], 0, 200);
        assert_eq!(sum, report.sum());
        for (j, &alpha) in report.alphas.iter().enumerate() {
            assert_eq!(eval.eval_sample(&[2, 3, 4, 1], j).0, alpha);
        }
    }

    #[test]
    fn ranges_add_up() {
        let inst = sample_instance();
        let mut eval = CrnEvaluator::new(&inst, 9);
        let prefix = [4, 2, 3, 1];
        let (a, fa) = eval.eval_range(&prefix, 0, 30);
        let (b, fb) = eval.eval_range(&prefix, 30, 100);
        let (total, ft) = eval.eval_range(&prefix, 0, 100);
        assert_eq!(a + b, total);
        assert_eq!(fa + fb, ft);
        assert_eq!(eval.sim_calls(), 30 + 70 + 100);
    }
}
