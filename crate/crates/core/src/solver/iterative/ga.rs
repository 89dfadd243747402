//! Genetic refinement of warmed-up routes with non-wrapping ordered
//! crossover (NWOX).

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::Result;
use crate::instance::{Instance, DEPOT};
use crate::rng::{solver_stream, Rng};
use crate::scoring::pad_prefix;
use crate::solver::ea::{CacheEntry, EvalCache};

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    /// Total population per generation, seeds included.
    pub population: usize,
    pub generations: usize,
    /// Monte-Carlo samples per evaluated solution.
    pub evals: usize,
    /// Parents selected per generation (tournament winners plus elites).
    pub parents: usize,
    /// Top solutions carried over unchanged.
    pub elites: usize,
    pub tournament: usize,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 400,
            generations: 5,
            evals: 100,
            parents: 50,
            elites: 10,
            tournament: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaResult {
    pub tour: Vec<usize>,
    pub visited: Vec<usize>,
    pub mean: f64,
    pub sim_calls: u64,
}

/// Non-wrapping ordered crossover with an explicit window: the child keeps
/// `a[lo..=hi]` in place and receives the remaining nodes in `b`'s relative
/// order, filling the holes left to right without wrapping around.
pub fn nwox_crossover(a: &[usize], b: &[usize], lo: usize, hi: usize) -> Vec<usize> {
    debug_assert!(lo <= hi && hi < a.len());
    let len = a.len();
    let mut child = vec![usize::MAX; len];
    let max = a.iter().copied().max().unwrap_or(0);
    let mut used = vec![false; max + 1];
    for i in lo..=hi {
        child[i] = a[i];
        used[a[i]] = true;
    }
    let mut fill = b.iter().filter(|&&v| !used[v]);
    for slot in child.iter_mut() {
        if *slot == usize::MAX {
            *slot = *fill.next().unwrap();
        }
    }
    child
}

/// NWOX with a uniformly drawn window.
pub fn nwox(a: &[usize], b: &[usize], rng: &mut Rng) -> Vec<usize> {
    let i = rng.gen_range(0..a.len());
    let j = rng.gen_range(0..a.len());
    nwox_crossover(a, b, i.min(j), i.max(j))
}

/// Suffix permutation for a visited sequence: visited nodes, the depot
/// marker, then the unvisited nodes in id order.
fn suffix_from_visited(n: usize, visited: &[usize]) -> Vec<usize> {
    let mut prefix = visited.to_vec();
    prefix.push(DEPOT);
    pad_prefix(n, &prefix)[1..].to_vec()
}

fn visited_of(suffix: &[usize]) -> Vec<usize> {
    suffix.iter().copied().take_while(|&v| v != DEPOT).collect()
}

/// Initial population: the seed routes first, then random permutations up
/// to the configured size (duplicates allowed, evaluation is cached).
pub fn initial_population(
    n: usize,
    seeds: &[Vec<usize>],
    cfg: &GaConfig,
    rng: &mut Rng,
) -> Vec<Vec<usize>> {
    let mut population: Vec<Vec<usize>> = seeds
        .iter()
        .take(cfg.population)
        .map(|visited| suffix_from_visited(n, visited))
        .collect();
    while population.len() < cfg.population {
        let mut suffix: Vec<usize> = (1..=n).collect();
        suffix.shuffle(rng);
        population.push(suffix);
    }
    population
}

fn entry_better(a: &CacheEntry, b: &CacheEntry) -> bool {
    a.sum.raw() as i128 * b.count as i128 > b.sum.raw() as i128 * a.count as i128
}

/// Improves seed routes by tournament selection and NWOX reproduction;
/// returns the best-by-mean route ever evaluated (the elitist guarantee:
/// never worse than the best seed).
pub fn ga_improve(
    inst: &Instance,
    seeds: &[Vec<usize>],
    cfg: &GaConfig,
    seed: u64,
) -> Result<GaResult> {
    let n = inst.n();
    let mut rng = solver_stream(seed, 2);
    let mut cache = EvalCache::new(inst, seed);
    let mut population = initial_population(n, seeds, cfg, &mut rng);

    for _generation in 0..cfg.generations {
        // evaluate (cached: re-seen phenotypes cost nothing)
        let fitness: Vec<CacheEntry> = population
            .iter()
            .map(|suffix| cache.estimate(&visited_of(suffix), cfg.evals).0)
            .collect();

        // elites: best of this generation, stable under exact comparison
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&a, &b| {
            if entry_better(&fitness[a], &fitness[b]) {
                std::cmp::Ordering::Less
            } else if entry_better(&fitness[b], &fitness[a]) {
                std::cmp::Ordering::Greater
            } else {
                a.cmp(&b)
            }
        });
        let elites: Vec<Vec<usize>> = order
            .iter()
            .take(cfg.elites.min(population.len()))
            .map(|&i| population[i].clone())
            .collect();

        // parents: elites plus tournament winners
        let mut parents = elites.clone();
        while parents.len() < cfg.parents {
            let mut winner = rng.gen_range(0..population.len());
            for _ in 1..cfg.tournament {
                let challenger = rng.gen_range(0..population.len());
                if entry_better(&fitness[challenger], &fitness[winner]) {
                    winner = challenger;
                }
            }
            parents.push(population[winner].clone());
        }

        // next generation: elites survive, the rest are NWOX offspring
        let mut next = elites;
        while next.len() < cfg.population {
            let a = &parents[rng.gen_range(0..parents.len())];
            let b = &parents[rng.gen_range(0..parents.len())];
            next.push(nwox(a, b, &mut rng));
        }
        population = next;
    }

    // evaluate the final generation too, then answer from the cache
    for suffix in &population {
        cache.estimate(&visited_of(suffix), cfg.evals);
    }
    let (visited, entry) = cache.best().expect("population is never empty");
    Ok(GaResult {
        tour: pad_prefix(n, &{
            let mut p = visited.clone();
            p.push(DEPOT);
            p
        }),
        visited,
        mean: entry.mean(),
        sim_calls: cache.sim_calls(),
    })
}

#[cfg(test)]
mod tests;
