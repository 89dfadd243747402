//! Multi-fidelity surrogate-assisted evolutionary solver.
//!
//! The search runs as a sequence of phases over one shared evaluation cache,
//! stepping the fidelity up as the population matures: plain self-adaptive
//! evolution at low fidelity first, then generations guarded by a
//! feasibility classifier, then generations pre-filtered or sorted by a
//! clustered Gaussian-process surrogate. The final answer is the best of the
//! top cached tours re-evaluated at high fidelity.

pub mod cache;
pub mod classifier;
pub mod gpr;
pub mod levenshtein;
pub mod ops;
pub mod reduce;

pub use cache::{CacheEntry, EvalCache};
pub use classifier::{rank_features, train_classifier, FeasibilityClassifier};
pub use gpr::ClusteredGpr;
pub use levenshtein::levenshtein;
pub use reduce::{reduce_dimension, ReduceReport};

use rand::Rng as _;

use crate::error::Result;
use crate::instance::Instance;
use crate::rng::{solver_stream, Rng};
use crate::scoring::pad_prefix;
use ops::{mutate, recombine, Genome};

/// How a phase shapes its offspring before evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseKind {
    /// Evaluate every offspring.
    Plain,
    /// Skip offspring the classifier predicts infeasible.
    ClassifierVeto,
    /// Discard the surrogate-predicted worst fraction of offspring.
    SurrogateFilter,
    /// Evaluate offspring best-first under a combined surrogate/classifier
    /// sort instead of discarding any.
    ClassifierSurrogateSort,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhaseConfig {
    /// Samples per tour evaluation in this phase.
    pub fidelity: usize,
    /// Evaluation budget of this phase (tour evaluations that issue new
    /// simulator samples).
    pub budget: usize,
    pub kind: PhaseKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EaConfig {
    /// Parent population size.
    pub mu: usize,
    /// Offspring per generation.
    pub lambda: usize,
    /// Probability of re-rolling each operator gene during mutation.
    pub op_mutation_prob: f64,
    /// Single-node evaluations per node in the reduction pass.
    pub reduce_reps: usize,
    /// Infeasible fraction at which a node is dropped.
    pub reduce_threshold: f64,
    pub phases: Vec<PhaseConfig>,
    /// Cached tours re-evaluated at the end.
    pub final_pool: usize,
    /// Fidelity of the final re-evaluation.
    pub final_fidelity: usize,
    /// Offspring with a higher predicted infeasibility are vetoed.
    pub veto_threshold: f64,
    /// Fraction of offspring the surrogate pre-filter keeps.
    pub prefilter_keep: f64,
    /// Generations between surrogate refits.
    pub retrain_every: usize,
    /// Cluster capacity of the surrogate ensemble.
    pub cluster_cap: usize,
}

impl Default for EaConfig {
    /// Full-scale schedule: three plain runs at fidelities 1/10/100 with
    /// 10000 evaluations each, a classifier-vetoed run, a surrogate-filtered
    /// run, and two higher-fidelity closing runs; top 250 cached tours are
    /// re-checked on 10000 samples.
    fn default() -> Self {
        use PhaseKind::*;
        EaConfig {
            mu: 40,
            lambda: 80,
            op_mutation_prob: 0.1,
            reduce_reps: 1000,
            reduce_threshold: 0.1,
            phases: vec![
                PhaseConfig { fidelity: 1, budget: 10_000, kind: Plain },
                PhaseConfig { fidelity: 10, budget: 10_000, kind: Plain },
                PhaseConfig { fidelity: 100, budget: 10_000, kind: Plain },
                PhaseConfig { fidelity: 100, budget: 10_000, kind: ClassifierVeto },
                PhaseConfig { fidelity: 100, budget: 5_000, kind: SurrogateFilter },
                PhaseConfig { fidelity: 500, budget: 5_000, kind: Plain },
                PhaseConfig { fidelity: 500, budget: 5_000, kind: ClassifierSurrogateSort },
            ],
            final_pool: 250,
            final_fidelity: 10_000,
            veto_threshold: classifier::VETO_THRESHOLD,
            prefilter_keep: 0.5,
            retrain_every: 20,
            cluster_cap: 200,
        }
    }
}

impl EaConfig {
    /// Scaled-down schedule for tests and quick desk runs; same seven-phase
    /// shape, two orders of magnitude fewer simulator calls.
    pub fn desk() -> Self {
        use PhaseKind::*;
        EaConfig {
            mu: 24,
            lambda: 48,
            phases: vec![
                PhaseConfig { fidelity: 1, budget: 400, kind: Plain },
                PhaseConfig { fidelity: 10, budget: 400, kind: Plain },
                PhaseConfig { fidelity: 50, budget: 400, kind: Plain },
                PhaseConfig { fidelity: 50, budget: 400, kind: ClassifierVeto },
                PhaseConfig { fidelity: 50, budget: 200, kind: SurrogateFilter },
                PhaseConfig { fidelity: 100, budget: 200, kind: Plain },
                PhaseConfig { fidelity: 100, budget: 200, kind: ClassifierSurrogateSort },
            ],
            final_pool: 100,
            final_fidelity: 2_000,
            retrain_every: 10,
            ..EaConfig::default()
        }
    }

    /// Upper bound on simulator calls the schedule can issue.
    pub fn sim_call_bound(&self, n: usize) -> u64 {
        let reduce = (n as u64 - 1) * self.reduce_reps as u64;
        let phases: u64 = self
            .phases
            .iter()
            .map(|p| p.budget as u64 * p.fidelity as u64)
            .sum();
        let fin = self.final_pool as u64 * self.final_fidelity as u64;
        reduce + phases + fin + 1 // +1 for the immediate-return baseline
    }
}

/// One row of the run log.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRow {
    pub phase: usize,
    pub generation: usize,
    pub best_mean: f64,
    pub evals_used: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EaResult {
    /// Best tour in submission shape.
    pub tour: Vec<usize>,
    /// Its visited part.
    pub visited: Vec<usize>,
    /// Mean score at the final fidelity.
    pub mean: f64,
    pub sim_calls: u64,
    pub evals: usize,
    pub active_nodes: usize,
    pub log: Vec<LogRow>,
}

/// Keeps the surrogate-predicted best `keep` fraction of the offspring
/// (never fewer than one), plus any offspring whose phenotype equals the
/// current best tour; original order is preserved.
pub fn surrogate_prefilter(
    offspring: Vec<Genome>,
    model: &ClusteredGpr,
    keep: f64,
    best_visited: &[usize],
) -> Vec<Genome> {
    let preds: Vec<f64> = offspring
        .iter()
        .map(|g| model.predict(g.visited()).0)
        .collect();
    let keep_n = ((offspring.len() as f64 * keep).ceil() as usize).max(1);
    let mut order: Vec<usize> = (0..offspring.len()).collect();
    order.sort_by(|&a, &b| preds[b].total_cmp(&preds[a]));
    let mut kept = vec![false; offspring.len()];
    for &i in order.iter().take(keep_n) {
        kept[i] = true;
    }
    offspring
        .into_iter()
        .enumerate()
        .filter(|(i, g)| kept[*i] || g.visited() == best_visited)
        .map(|(_, g)| g)
        .collect()
}

/// Fits the surrogate ensemble on every cached phenotype.
pub fn fit_surrogate(cache: &EvalCache, cap: usize) -> Option<ClusteredGpr> {
    let data: Vec<(Vec<usize>, f64)> = cache
        .iter()
        .map(|(visited, entry)| (visited.clone(), entry.mean()))
        .collect();
    ClusteredGpr::fit(&data, cap)
}

/// Exact mean comparison for cache entries (cross-multiplied integer sums).
fn entry_better(a: &CacheEntry, b: &CacheEntry) -> bool {
    a.sum.raw() as i128 * b.count as i128 > b.sum.raw() as i128 * a.count as i128
}

/// Runs the full schedule on one instance. All randomness derives from
/// `seed`: the evaluation streams are the common-random-number streams of
/// `(seed, instance 0)` and the evolutionary decisions come from a solver
/// stream, so two runs with equal inputs are identical.
pub fn solve(inst: &Instance, cfg: &EaConfig, seed: u64) -> Result<EaResult> {
    let n = inst.n();
    let mut cache = EvalCache::new(inst, seed);
    let mut rng = solver_stream(seed, 0);
    let mut evals = 0usize;
    let mut log = Vec::new();

    let report = reduce_dimension(&mut cache, cfg.reduce_reps, cfg.reduce_threshold);
    cache.estimate(&[], 1); // immediate-return baseline

    if report.active.len() >= 2 {
        run_phases(inst, cfg, &report.active, &mut cache, &mut rng, &mut evals, &mut log);
    }

    // Final selection: re-evaluate the best cached tours at high fidelity.
    let mut best: Option<(Vec<usize>, CacheEntry)> = None;
    for (visited, _) in cache.top_k(cfg.final_pool) {
        let (entry, fresh) = cache.estimate(&visited, cfg.final_fidelity);
        if fresh {
            evals += 1;
        }
        let better = match &best {
            None => true,
            Some((_, cur)) => entry_better(&entry, cur),
        };
        if better {
            best = Some((visited, entry));
        }
    }
    let (visited, entry) = best.expect("cache holds at least the baseline");
    let mut prefix = visited.clone();
    prefix.push(crate::instance::DEPOT);
    Ok(EaResult {
        tour: pad_prefix(n, &prefix),
        visited,
        mean: entry.mean(),
        sim_calls: cache.sim_calls(),
        evals,
        active_nodes: report.active.len(),
        log,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_phases(
    inst: &Instance,
    cfg: &EaConfig,
    active: &[usize],
    cache: &mut EvalCache,
    rng: &mut Rng,
    evals: &mut usize,
    log: &mut Vec<LogRow>,
) {
    let n = inst.n();
    let tau = 1.0 / (2.0 * (active.len() + 1) as f64).sqrt();
    let mut population: Vec<(Genome, f64)> = (0..cfg.mu)
        .map(|_| (Genome::random(active, rng), f64::NEG_INFINITY))
        .collect();
    let mut classifier: Option<FeasibilityClassifier> = None;
    let mut surrogate: Option<ClusteredGpr> = None;

    for (phase_no, phase) in cfg.phases.iter().enumerate() {
        let mut budget = phase.budget;
        let needs_classifier = matches!(
            phase.kind,
            PhaseKind::ClassifierVeto | PhaseKind::ClassifierSurrogateSort
        );
        let needs_surrogate = matches!(
            phase.kind,
            PhaseKind::SurrogateFilter | PhaseKind::ClassifierSurrogateSort
        );
        if needs_classifier {
            classifier = Some(train_classifier(cache));
        }
        if needs_surrogate {
            surrogate = fit_surrogate(cache, cfg.cluster_cap);
        }

        // Bring the inherited population up to this phase's fidelity.
        for (genome, fitness) in population.iter_mut() {
            if budget == 0 {
                break;
            }
            let (entry, fresh) = cache.estimate(genome.visited(), phase.fidelity);
            if fresh {
                budget -= 1;
                *evals += 1;
            }
            *fitness = entry.mean();
        }

        let mut generation = 0usize;
        let mut stalled = 0usize;
        while budget > 0 && stalled < 25 {
            generation += 1;
            let mut offspring: Vec<Genome> = (0..cfg.lambda)
                .map(|_| {
                    let pa = &population[rng.gen_range(0..population.len())].0;
                    let pb = &population[rng.gen_range(0..population.len())].0;
                    let mut child = recombine(pa, pb, rng);
                    mutate(&mut child, tau, cfg.op_mutation_prob, rng);
                    child
                })
                .collect();

            match phase.kind {
                PhaseKind::Plain => {}
                PhaseKind::ClassifierVeto => {
                    let clf = classifier.as_ref().expect("trained above");
                    let kept: Vec<Genome> = offspring
                        .iter()
                        .filter(|g| {
                            clf.predict_infeasible(&rank_features(n, g.visited()))
                                <= cfg.veto_threshold
                        })
                        .cloned()
                        .collect();
                    // a veto of the entire generation would stall the search
                    if !kept.is_empty() {
                        offspring = kept;
                    }
                }
                PhaseKind::SurrogateFilter => {
                    if let Some(model) = &surrogate {
                        let best_visited = cache
                            .best()
                            .map(|(v, _)| v)
                            .unwrap_or_default();
                        offspring =
                            surrogate_prefilter(offspring, model, cfg.prefilter_keep, &best_visited);
                    }
                }
                PhaseKind::ClassifierSurrogateSort => {
                    if let (Some(clf), Some(model)) = (&classifier, &surrogate) {
                        let scores: Vec<(f64, f64)> = offspring
                            .iter()
                            .map(|g| {
                                let pred = model.predict(g.visited()).0;
                                let p_inf =
                                    clf.predict_infeasible(&rank_features(n, g.visited()));
                                (pred, p_inf)
                            })
                            .collect();
                        let span = {
                            let max = scores.iter().map(|s| s.0).fold(f64::MIN, f64::max);
                            let min = scores.iter().map(|s| s.0).fold(f64::MAX, f64::min);
                            (max - min).max(1e-9)
                        };
                        let mut order: Vec<usize> = (0..offspring.len()).collect();
                        // combined key: surrogate prediction, discounted by
                        // the infeasibility probability on the same scale
                        let key = |i: usize| scores[i].0 - span * scores[i].1;
                        order.sort_by(|&a, &b| key(b).total_cmp(&key(a)));
                        offspring = order.into_iter().map(|i| offspring[i].clone()).collect();
                    }
                }
            }

            let before = budget;
            let mut scored: Vec<(Genome, f64)> = Vec::with_capacity(offspring.len());
            for child in offspring {
                if budget == 0 {
                    break;
                }
                let (entry, fresh) = cache.estimate(child.visited(), phase.fidelity);
                if fresh {
                    budget -= 1;
                    *evals += 1;
                }
                scored.push((child, entry.mean()));
            }
            stalled = if budget == before { stalled + 1 } else { 0 };

            // (mu + lambda) truncation; the stable sort keeps parents ahead
            // of equal offspring.
            population.extend(scored);
            population.sort_by(|a, b| b.1.total_cmp(&a.1));
            population.truncate(cfg.mu);

            log.push(LogRow {
                phase: phase_no + 1,
                generation,
                best_mean: population[0].1,
                evals_used: *evals,
            });

            if needs_surrogate && generation % cfg.retrain_every == 0 {
                surrogate = fit_surrogate(cache, cfg.cluster_cap);
            }
        }
    }
}
