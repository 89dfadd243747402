//! Stochastic tour simulation.
//!
//! A traversal of edge `(i, j)` realizes the travel time `d(i,j) * eta / 100`
//! where `eta` is drawn uniformly from `{1, ..., 100}` per traversal, so the
//! known distance is the worst case. Arriving at a node before its window
//! opens means waiting until the opening time to depart; arriving after the
//! window closes forfeits the prize and costs a penalty of -1; the first
//! moment the elapsed time exceeds the budget `T` (the return leg included)
//! costs a penalty of `-n` and ends the simulation.
//!
//! [`check_solution`] evaluates a complete tour under one noise sample;
//! [`env::Env`] exposes the same semantics one step at a time. Both run on
//! the same [`Walk`] core, so they agree exactly when fed the same noise.

pub mod env;

pub use env::{Env, StepOutcome};

use crate::error::{Error, Result};
use crate::fixed::Centi;
use crate::instance::{Instance, DEPOT};
use crate::rng::Rng;
use rand::Rng as _;

/// Source of per-traversal noise factors in `{1, ..., 100}`.
///
/// The production source draws from an RNG stream; tests substitute fixed
/// sequences to pin exact travel times.
pub trait EtaSource {
    fn next_eta(&mut self, from: usize, to: usize) -> i64;
}

impl EtaSource for Rng {
    fn next_eta(&mut self, _from: usize, _to: usize) -> i64 {
        self.gen_range(1..=100)
    }
}

/// Fixed noise factor for every traversal; `ConstEta(100)` forces maximum
/// travel times.
#[derive(Debug, Clone, Copy)]
pub struct ConstEta(pub i64);

impl EtaSource for ConstEta {
    fn next_eta(&mut self, _from: usize, _to: usize) -> i64 {
        self.0
    }
}

/// Replays a fixed sequence of noise factors, one per traversal in order.
#[derive(Debug, Clone)]
pub struct SeqEta {
    etas: Vec<i64>,
    pos: usize,
}

impl SeqEta {
    pub fn new(etas: impl Into<Vec<i64>>) -> Self {
        let etas = etas.into();
        debug_assert!(etas.iter().all(|&e| (1..=100).contains(&e)));
        SeqEta { etas, pos: 0 }
    }
}

impl EtaSource for SeqEta {
    fn next_eta(&mut self, _from: usize, _to: usize) -> i64 {
        let eta = self.etas[self.pos];
        self.pos += 1;
        eta
    }
}

/// Replays a borrowed sequence of noise factors (one precomputed Monte-Carlo
/// sample row; see `scoring::CrnEvaluator`).
#[derive(Debug, Clone)]
pub struct SliceEta<'a> {
    row: &'a [i64],
    pos: usize,
}

impl<'a> SliceEta<'a> {
    pub fn new(row: &'a [i64]) -> Self {
        SliceEta { row, pos: 0 }
    }
}

impl EtaSource for SliceEta<'_> {
    fn next_eta(&mut self, _from: usize, _to: usize) -> i64 {
        let eta = self.row[self.pos];
        self.pos += 1;
        eta
    }
}

/// Samples one stochastic travel time for edge `(i, j)`.
pub fn sample_travel_time(
    inst: &Instance,
    i: usize,
    j: usize,
    eta: &mut impl EtaSource,
) -> Centi {
    Centi(inst.dist(i, j) * eta.next_eta(i, j))
}

/// Effect of moving the walk one node further.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkStep {
    pub node: usize,
    /// Sampled travel time of the leg just traversed.
    pub leg_time: Centi,
    pub arrival: Centi,
    /// Arrival plus any waiting for the window to open.
    pub departure: Centi,
    pub reward: Centi,
    pub penalty: Centi,
    /// The walk returned to the depot or violated the budget.
    pub done: bool,
}

/// Incremental simulation of one tour under one noise sample.
///
/// Shared core of [`check_solution`], the stepwise environment and the
/// policy rollouts; holds no randomness of its own.
#[derive(Debug, Clone)]
pub struct Walk<'a> {
    inst: &'a Instance,
    current: usize,
    arrival: Centi,
    departure: Centi,
    reward: Centi,
    penalty: Centi,
    violation_node: Option<usize>,
    window_missed: bool,
    finished: bool,
}

impl<'a> Walk<'a> {
    /// Starts at the depot at time zero.
    pub fn start(inst: &'a Instance) -> Self {
        Walk {
            inst,
            current: DEPOT,
            arrival: Centi::ZERO,
            departure: Centi::ZERO,
            reward: Centi::ZERO,
            penalty: Centi::ZERO,
            violation_node: None,
            window_missed: false,
            finished: false,
        }
    }

    /// Resumes mid-tour at `current` with the clock at `decision_time`;
    /// rewards accumulate from here on. Used by policy rollouts to simulate
    /// completions of a partial tour.
    pub fn resume(inst: &'a Instance, current: usize, decision_time: Centi) -> Self {
        Walk {
            inst,
            current,
            arrival: decision_time,
            departure: decision_time,
            reward: Centi::ZERO,
            penalty: Centi::ZERO,
            violation_node: None,
            window_missed: false,
            finished: false,
        }
    }

    pub fn current(&self) -> usize {
        self.current
    }

    /// Time the walk is ready to leave the current node (arrival plus
    /// waiting); the "current time" from a decision-making point of view.
    pub fn decision_time(&self) -> Centi {
        self.departure
    }

    pub fn arrival_time(&self) -> Centi {
        self.arrival
    }

    /// Accumulated prizes and penalties.
    pub fn total_reward(&self) -> Centi {
        self.reward
    }

    /// Accumulated penalties only (zero or negative).
    pub fn total_penalty(&self) -> Centi {
        self.penalty
    }

    pub fn finished(&self) -> bool {
        self.finished
    }

    /// No window missed and no budget violation so far.
    pub fn feasible(&self) -> bool {
        self.violation_node.is_none() && !self.window_missed
    }

    pub fn violation_node(&self) -> Option<usize> {
        self.violation_node
    }

    /// Moves to `next`, drawing one noise factor for the traversed edge.
    ///
    /// The caller guarantees `next` is a valid, unvisited node (or the depot
    /// to finish); the walk itself only tracks timing and rewards.
    pub fn step(&mut self, next: usize, eta: &mut impl EtaSource) -> WalkStep {
        debug_assert!(!self.finished, "stepped a finished walk");
        let leg_time = sample_travel_time(self.inst, self.current, next, eta);
        let arrival = self.departure + leg_time;
        let budget = Centi::from_units(self.inst.t_max());

        let mut reward = Centi::ZERO;
        let mut penalty = Centi::ZERO;
        let mut departure = arrival;
        if arrival > budget {
            // First budget violation; -n once and the walk ends here.
            penalty = Centi::from_units(-(self.inst.n() as i64));
            self.violation_node = Some(next);
            self.finished = true;
        } else if next == DEPOT {
            self.finished = true;
        } else if arrival <= Centi::from_units(self.inst.close(next)) {
            reward = self.inst.prize(next);
            departure = arrival.max(Centi::from_units(self.inst.open(next)));
        } else {
            // Window already closed: no prize, no waiting, -1.
            penalty = Centi::from_units(-1);
            self.window_missed = true;
        }

        self.reward += reward + penalty;
        self.penalty += penalty;
        self.current = next;
        self.arrival = arrival;
        self.departure = departure;
        WalkStep {
            node: next,
            leg_time,
            arrival,
            departure,
            reward,
            penalty,
            done: self.finished,
        }
    }
}

/// Result of simulating one tour under one noise sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimOutcome {
    /// Sum of prizes and penalties over the effective prefix.
    pub total_reward: Centi,
    /// Tour duration including waiting and the return leg (up to the budget
    /// violation if one occurred).
    pub total_time: Centi,
    /// One record per simulated step, final depot arrival included.
    pub per_node: Vec<WalkStep>,
    /// No window miss and no budget violation.
    pub feasible: bool,
    /// Node at which the one-time budget penalty was incurred, if any.
    pub violation_node: Option<usize>,
}

/// Checks that `tour` has the required shape: length `n + 1`, starting at
/// the depot, followed by a permutation of all nodes. Returns the index of
/// the second depot visit (the end of the effective prefix).
pub fn validate_tour(inst: &Instance, tour: &[usize]) -> Result<usize> {
    let n = inst.n();
    if tour.len() != n + 1 {
        return Err(Error::InvalidInput(format!(
            "tour length {} differs from n + 1 = {}",
            tour.len(),
            n + 1
        )));
    }
    if tour[0] != DEPOT {
        return Err(Error::InvalidInput(format!(
            "tour must start at the depot, found node {}",
            tour[0]
        )));
    }
    let mut seen = vec![false; n + 1];
    for &node in &tour[1..] {
        if node < 1 || node > n {
            return Err(Error::InvalidInput(format!("node {node} out of range")));
        }
        if seen[node] {
            return Err(Error::InvalidInput(format!(
                "node {node} appears more than once after the start"
            )));
        }
        seen[node] = true;
    }
    // All nodes seen exactly once; the depot therefore appears again.
    let end = tour[1..].iter().position(|&v| v == DEPOT).unwrap() + 1;
    Ok(end)
}

/// Simulates the effective prefix of a complete tour under one noise sample.
pub fn check_solution(
    inst: &Instance,
    tour: &[usize],
    eta: &mut impl EtaSource,
) -> Result<SimOutcome> {
    let end = validate_tour(inst, tour)?;
    let mut walk = Walk::start(inst);
    let mut per_node = Vec::with_capacity(end);
    for &next in &tour[1..=end] {
        per_node.push(walk.step(next, eta));
        if walk.finished() {
            break;
        }
    }
    Ok(SimOutcome {
        total_reward: walk.total_reward(),
        total_time: walk.arrival_time(),
        feasible: walk.feasible(),
        violation_node: walk.violation_node(),
        per_node,
    })
}

/// Fast-path evaluation of a tour prefix (nodes after the leading depot, up
/// to and including the second depot visit) that skips record-keeping.
/// Exactly equivalent to [`check_solution`] on the padded tour.
pub fn simulate_prefix(
    inst: &Instance,
    prefix: &[usize],
    eta: &mut impl EtaSource,
) -> (Centi, bool) {
    let mut walk = Walk::start(inst);
    for &next in prefix {
        walk.step(next, eta);
        if walk.finished() {
            break;
        }
    }
    debug_assert!(walk.finished(), "prefix did not return to the depot");
    (walk.total_reward(), walk.feasible())
}
