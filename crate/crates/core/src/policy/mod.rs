//! Adaptive stepwise construction: a masked heuristic prior over environment
//! states and Monte-Carlo rollout action selection on top of it.
//!
//! The prior scores each admissible node by prize per expected travel time,
//! discounted when even the worst-case arrival would miss the node's window
//! or the budget, and turns the scores into probabilities by softmax. The
//! rollout selector re-ranks the prior's top actions by simulating
//! completions of the partial tour on independent noise streams; the real
//! environment's travel time is only consumed after the action is committed.

use rand::Rng as _;

use crate::error::Result;
use crate::fixed::Centi;
use crate::instance::{Instance, DEPOT};
use crate::rng::{rollout_stream, Rng};
use crate::sim::{Env, EtaSource, Walk};

/// Mean of the travel-time noise factor (uniform on 1..=100, scaled by 100).
const MEAN_ETA: f64 = 0.505;
/// Floor of the expected-travel-time denominator in the desirability ratio.
const EPSILON: f64 = 0.01;
/// Multiplier applied when the worst-case arrival breaks a window or the
/// budget.
const RISK_DISCOUNT: f64 = 0.2;

/// Decision-relevant view of an episode.
#[derive(Debug, Clone)]
pub struct PolicyState<'a> {
    pub inst: &'a Instance,
    pub current: usize,
    /// Time the episode is ready to leave the current node.
    pub elapsed: Centi,
    /// Visit flags indexed by node id.
    pub visited: Vec<bool>,
}

impl<'a> PolicyState<'a> {
    pub fn from_env<E: EtaSource>(env: &Env<'a, E>) -> Self {
        let inst = env.instance();
        let visited = (0..=inst.n()).map(|v| v > 0 && env.is_visited(v)).collect();
        PolicyState {
            inst,
            current: env.current(),
            elapsed: env.decision_time(),
            visited,
        }
    }
}

/// Probabilities over next nodes; masked actions carry probability zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionDistribution {
    /// `probs[v - 1]` is the probability of moving to node `v`.
    pub probs: Vec<f64>,
}

impl ActionDistribution {
    /// Highest-probability action; ties resolve to the lowest node id.
    pub fn argmax(&self) -> usize {
        let mut best = DEPOT;
        let mut best_p = f64::MIN;
        for (idx, &p) in self.probs.iter().enumerate() {
            if p > best_p {
                best_p = p;
                best = idx + 1;
            }
        }
        best
    }

    /// The `k` most probable actions, probability-descending with node-id
    /// tie-breaks.
    pub fn top_k(&self, k: usize) -> Vec<usize> {
        let mut nodes: Vec<usize> = (1..=self.probs.len())
            .filter(|&v| self.probs[v - 1] > 0.0)
            .collect();
        nodes.sort_by(|&a, &b| {
            self.probs[b - 1]
                .total_cmp(&self.probs[a - 1])
                .then(a.cmp(&b))
        });
        nodes.truncate(k);
        nodes
    }

    /// Samples an action.
    pub fn sample(&self, rng: &mut Rng) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (idx, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return idx + 1;
            }
        }
        // numerical slack: fall back to the last admissible action
        (1..=self.probs.len())
            .rev()
            .find(|&v| self.probs[v - 1] > 0.0)
            .unwrap_or(DEPOT)
    }
}

/// Is moving to `node` admissible? The depot always is; otherwise the node
/// must be unvisited, its window must still be open now, and it must open
/// within the budget.
fn admissible(state: &PolicyState, node: usize) -> bool {
    if node == DEPOT {
        return true;
    }
    if state.visited[node] {
        return false;
    }
    let inst = state.inst;
    inst.open(node) <= inst.t_max() && Centi::from_units(inst.close(node)) >= state.elapsed
}

/// Heuristic prior: softmax over prize-per-expected-travel-time with a risk
/// discount for nodes whose worst-case arrival misses their window or the
/// budget.
pub fn prior_policy(state: &PolicyState) -> ActionDistribution {
    let inst = state.inst;
    let n = inst.n();
    let mut desirability = vec![f64::NEG_INFINITY; n];
    for node in 1..=n {
        if !admissible(state, node) {
            continue;
        }
        let mut u = if node == DEPOT {
            0.0
        } else {
            let expected = MEAN_ETA * inst.dist(state.current, node) as f64;
            inst.prize(node).as_f64() / expected.max(EPSILON)
        };
        if node != DEPOT {
            let worst_arrival = state.elapsed + Centi::from_units(inst.dist(state.current, node));
            if worst_arrival > Centi::from_units(inst.close(node))
                || worst_arrival > Centi::from_units(inst.t_max())
            {
                u *= RISK_DISCOUNT;
            }
        }
        desirability[node - 1] = u;
    }

    let max_u = desirability.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs = vec![0.0; n];
    let mut total = 0.0;
    for node in 1..=n {
        if desirability[node - 1].is_finite() {
            let w = (desirability[node - 1] - max_u).exp();
            probs[node - 1] = w;
            total += w;
        }
    }
    for p in probs.iter_mut() {
        *p /= total;
    }
    ActionDistribution { probs }
}

/// Chooses an action by its name. Implementations must only return
/// admissible actions.
pub trait ActionSelector {
    fn select(&mut self, state: &PolicyState) -> usize;
}

/// Argmax of the prior, no lookahead.
#[derive(Debug, Default, Clone)]
pub struct GreedySelector;

impl ActionSelector for GreedySelector {
    fn select(&mut self, state: &PolicyState) -> usize {
        prior_policy(state).argmax()
    }
}

/// Simulates one completion of the partial tour: take `first`, then follow
/// prior samples until the walk finishes. Returns the reward collected from
/// this decision on.
fn rollout_value(state: &PolicyState, first: usize, rng: &mut Rng) -> Centi {
    let mut walk = Walk::resume(state.inst, state.current, state.elapsed);
    let mut visited = state.visited.clone();
    let mut next = first;
    loop {
        walk.step(next, rng);
        visited[next] = true;
        if walk.finished() {
            return walk.total_reward();
        }
        let rollout_state = PolicyState {
            inst: state.inst,
            current: walk.current(),
            elapsed: walk.decision_time(),
            visited: visited.clone(),
        };
        next = prior_policy(&rollout_state).sample(rng);
    }
}

/// Rollout action selection: for each of the prior's top `k` actions run `r`
/// rollouts on independent streams and commit to the action with the best
/// average reward-to-go (exact integer comparison; ties go to the lowest
/// node id).
pub fn mc_rollout_select(
    state: &PolicyState,
    k: usize,
    r: usize,
    rollout_seed: u64,
    decision_id: u64,
) -> usize {
    debug_assert!(k >= 1 && r >= 1);
    let prior = prior_policy(state);
    let candidates = prior.top_k(k);
    match candidates.len() {
        0 => return DEPOT,
        1 => return candidates[0],
        _ => {}
    }
    if k == 1 {
        return prior.argmax();
    }

    let mut best: Option<(Centi, usize)> = None;
    for (rank, &action) in candidates.iter().enumerate() {
        let mut sum = Centi::ZERO;
        for rollout in 0..r as u64 {
            let mut rng = rollout_stream(rollout_seed, (decision_id << 8) | rank as u64, rollout);
            sum += rollout_value(state, action, &mut rng);
        }
        let better = match best {
            None => true,
            Some((best_sum, best_action)) => {
                sum > best_sum || (sum == best_sum && action < best_action)
            }
        };
        if better {
            best = Some((sum, action));
        }
    }
    best.expect("at least two candidates").1
}

/// Rollout-based selector with its own decision counter and noise seed.
#[derive(Debug, Clone)]
pub struct RolloutSelector {
    pub k: usize,
    pub r: usize,
    pub seed: u64,
    decisions: u64,
}

impl RolloutSelector {
    pub fn new(k: usize, r: usize, seed: u64) -> Self {
        RolloutSelector {
            k,
            r,
            seed,
            decisions: 0,
        }
    }
}

impl ActionSelector for RolloutSelector {
    fn select(&mut self, state: &PolicyState) -> usize {
        let id = self.decisions;
        self.decisions += 1;
        mc_rollout_select(state, self.k, self.r, self.seed, id)
    }
}

/// Drives one episode to completion on an explicit environment noise stream
/// and returns the submission-shaped tour and its realized total reward.
pub fn run_episode(
    inst: &Instance,
    selector: &mut dyn ActionSelector,
    env_stream: Rng,
) -> Result<(Vec<usize>, Centi)> {
    let mut env = Env::with_eta(inst, env_stream);
    while !env.done() {
        let state = PolicyState::from_env(&env);
        let action = selector.select(&state);
        env.step(action)?;
    }
    Ok((env.submission_tour(), env.total_reward()))
}

/// [`run_episode`] on the derived stream of `sample_seed`.
pub fn run_policy(
    inst: &Instance,
    selector: &mut dyn ActionSelector,
    sample_seed: u64,
) -> Result<(Vec<usize>, Centi)> {
    run_episode(inst, selector, crate::rng::sample_stream(sample_seed, 0, 0))
}
