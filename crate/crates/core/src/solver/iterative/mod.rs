//! Iterative arc-penalty solver: alternate between exactly optimizing a
//! deterministic surrogate and simulating its proposal, feeding measured
//! penalties back into the surrogate, cutting solutions and structures, and
//! growing the admissible route size when the remaining gap closes. A GA
//! over the stored routes refines the result.

pub mod ga;
mod surrogate;

pub use ga::{ga_improve, initial_population, nwox, nwox_crossover, GaConfig, GaResult};
pub use surrogate::{solve_surrogate_model, upper_bound, SurrogateState};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fixed::Centi;
use crate::instance::{Instance, DEPOT};
use crate::rng::batch_sim_stream;
use crate::scoring::pad_prefix;
use crate::sim::Walk;

#[derive(Debug, Clone, PartialEq)]
pub struct IterConfig {
    /// Maximum iterations `K`.
    pub max_iterations: usize,
    /// Simulations per proposed route `M`.
    pub sims_per_iteration: usize,
    /// Fraction of feasible simulations required to store a route.
    pub feasibility_threshold: f64,
    /// Relative gap to the upper bound below which the route size grows.
    pub gap_threshold: f64,
}

impl Default for IterConfig {
    fn default() -> Self {
        IterConfig {
            max_iterations: 200,
            sims_per_iteration: 100,
            feasibility_threshold: 0.9,
            gap_threshold: 0.02,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterLogRow {
    pub iteration: usize,
    pub max_route_size: usize,
    pub surrogate_value: f64,
    pub upper_bound: f64,
    pub feasible_fraction: f64,
    pub best_mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterResult {
    pub tour: Vec<usize>,
    pub visited: Vec<usize>,
    /// Mean reward of the returned route over a fresh validation batch.
    pub mean: f64,
    pub iterations: usize,
    /// Routes that passed the feasibility threshold, best mean first.
    pub stored: Vec<(Vec<usize>, f64)>,
    pub log: Vec<IterLogRow>,
    pub sim_calls: u64,
}

/// Mean reward, mean penalty and feasible fraction of `visited` over `m`
/// simulations of batch `batch`.
fn measure(
    inst: &Instance,
    visited: &[usize],
    m: usize,
    seed: u64,
    batch: u64,
    sim_calls: &mut u64,
) -> (f64, f64, f64) {
    *sim_calls += m as u64;
    let results: Vec<(i64, i64, bool)> = (0..m as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = batch_sim_stream(seed, batch, j);
            let mut walk = Walk::start(inst);
            for &v in visited {
                walk.step(v, &mut rng);
                if walk.finished() {
                    break;
                }
            }
            if !walk.finished() {
                walk.step(DEPOT, &mut rng);
            }
            (
                walk.total_reward().raw(),
                walk.total_penalty().raw(),
                walk.feasible(),
            )
        })
        .collect();
    let reward: i64 = results.iter().map(|r| r.0).sum();
    let penalty: i64 = results.iter().map(|r| r.1).sum();
    let feasible = results.iter().filter(|r| r.2).count();
    (
        reward as f64 / (100.0 * m as f64),
        penalty as f64 / (100.0 * m as f64),
        feasible as f64 / m as f64,
    )
}

/// Cuts nodes and arcs that no feasible route can ever use: nodes whose
/// window opens after the budget, arcs whose earliest possible arrival
/// misses the target window or the budget (departure is never earlier than
/// the opening time, travel never faster than a hundredth of the distance).
fn precut(inst: &Instance, state: &mut SurrogateState) {
    let n = inst.n();
    let budget = Centi::from_units(inst.t_max());
    for v in 2..=n {
        if inst.open(v) > inst.t_max() {
            state.remove_node(v);
        }
    }
    for i in 1..=n {
        let min_departure = if i == DEPOT {
            Centi::ZERO
        } else {
            Centi::from_units(inst.open(i))
        };
        for j in 1..=n {
            if i == j {
                continue;
            }
            let earliest = min_departure + Centi(inst.dist(i, j));
            let misses_window = j != DEPOT && earliest > Centi::from_units(inst.close(j));
            if earliest > budget || misses_window {
                state.remove_arc(i, j);
            }
        }
    }
}

/// The iterative search. Returns the best stored route revalidated on a
/// fresh batch; when nothing ever passes the threshold the immediate-return
/// route (reward 0) is the answer.
pub fn iterative_search(inst: &Instance, cfg: &IterConfig, seed: u64) -> Result<IterResult> {
    if cfg.max_iterations == 0 || cfg.sims_per_iteration == 0 {
        return Err(Error::InvalidInput(
            "iteration and simulation counts must be positive".into(),
        ));
    }
    let n = inst.n();
    let mut state = SurrogateState::new(inst);
    precut(inst, &mut state);
    let size_cap = state.available_nodes() + 1;

    let mut sim_calls = 0u64;
    let mut stored: Vec<(Vec<usize>, f64)> = Vec::new();
    let mut best_mean = 0.0f64; // immediate return is always feasible
    let mut log = Vec::new();
    let mut iterations = 0;

    for k in 0..cfg.max_iterations {
        iterations = k + 1;
        let (route, surrogate_value) = match solve_surrogate_model(&state) {
            Ok(found) => found,
            Err(Error::Exhausted) => {
                if state.max_route_size < size_cap {
                    state.max_route_size += 1;
                    continue;
                }
                break;
            }
            Err(other) => return Err(other),
        };

        let (mean, mean_penalty, feasible_fraction) = measure(
            inst,
            &route,
            cfg.sims_per_iteration,
            seed,
            k as u64,
            &mut sim_calls,
        );

        if feasible_fraction >= cfg.feasibility_threshold {
            stored.push((route.clone(), mean));
            best_mean = best_mean.max(mean);
            state.cut_solution(route.clone());
        } else {
            state.cut_structure(&route);
        }
        state.register_penalty(&route, mean_penalty);

        let ub = match upper_bound(&state) {
            Ok(v) => v,
            Err(Error::Exhausted) => f64::NEG_INFINITY,
            Err(other) => return Err(other),
        };
        log.push(IterLogRow {
            iteration: iterations,
            max_route_size: state.max_route_size,
            surrogate_value,
            upper_bound: ub,
            feasible_fraction,
            best_mean,
        });

        let gap = (ub - best_mean) / ub.abs().max(1e-9);
        if best_mean >= ub - 1e-9 || gap < cfg.gap_threshold {
            if state.max_route_size < size_cap {
                state.max_route_size += 1;
            } else if best_mean >= ub - 1e-9 {
                // bound met at the largest admissible size: nothing better
                // can exist
                break;
            }
        }
    }

    // Revalidate stored routes, best first, on fresh batches; fall back to
    // the immediate return.
    stored.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut chosen: Option<(Vec<usize>, f64)> = None;
    for (idx, (route, _)) in stored.iter().enumerate() {
        let (mean, _, feasible_fraction) = measure(
            inst,
            route,
            cfg.sims_per_iteration,
            seed,
            (cfg.max_iterations + idx) as u64,
            &mut sim_calls,
        );
        if feasible_fraction >= cfg.feasibility_threshold {
            chosen = Some((route.clone(), mean));
            break;
        }
    }
    let (visited, mean) = chosen.unwrap_or((Vec::new(), 0.0));

    let mut prefix = visited.clone();
    prefix.push(DEPOT);
    Ok(IterResult {
        tour: pad_prefix(n, &prefix),
        visited,
        mean,
        iterations,
        stored,
        log,
        sim_calls,
    })
}

/// Full pipeline: iterative search, then GA refinement seeded with the
/// stored routes. Returns the GA's best route.
pub fn solve(
    inst: &Instance,
    cfg: &IterConfig,
    ga_cfg: &GaConfig,
    seed: u64,
) -> Result<GaResult> {
    let iter = iterative_search(inst, cfg, seed)?;
    let mut seeds: Vec<Vec<usize>> = iter.stored.iter().map(|(r, _)| r.clone()).collect();
    seeds.truncate(16);
    if seeds.is_empty() {
        seeds.push(iter.visited.clone());
    }
    let mut result = ga_improve(inst, &seeds, ga_cfg, seed)?;
    result.sim_calls += iter.sim_calls;
    Ok(result)
}
