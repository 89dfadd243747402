//! Stepwise environment: build a solution node by node, with the travel time
//! of each edge revealed only after traversing it.

use super::{EtaSource, Walk};
use crate::error::{Error, Result};
use crate::fixed::Centi;
use crate::instance::{Instance, DEPOT};
use crate::rng::{sample_stream, Rng};

/// What one environment step revealed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOutcome {
    /// Sampled travel time of the edge just traversed.
    pub last_leg_time: Centi,
    /// Cumulative tour time on arrival at the new node.
    pub elapsed: Centi,
    /// Prize collected this step.
    pub reward: Centi,
    /// Penalty incurred this step.
    pub penalty: Centi,
    /// No window miss or budget violation so far in the episode.
    pub feasible: bool,
    /// The episode ended (returned to the depot or budget violated).
    pub done: bool,
}

/// One episode of stepwise tour construction.
///
/// Episodes are independent values; each owns its noise source and can run
/// in parallel with others. A single episode is strictly sequential.
#[derive(Debug, Clone)]
pub struct Env<'a, E: EtaSource> {
    walk: Walk<'a>,
    eta: E,
    visited: Vec<bool>,
    tour: Vec<usize>,
    done: bool,
}

impl<'a> Env<'a, Rng> {
    /// Fresh episode at the depot with elapsed time zero, drawing noise from
    /// the derived stream of `sample_seed`.
    pub fn reset(inst: &'a Instance, sample_seed: u64) -> Self {
        Env::with_eta(inst, sample_stream(sample_seed, 0, 0))
    }
}

impl<'a, E: EtaSource> Env<'a, E> {
    /// Fresh episode with an explicit noise source (tests pin sequences,
    /// replay harnesses share a stream with [`super::check_solution`]).
    pub fn with_eta(inst: &'a Instance, eta: E) -> Self {
        let mut visited = vec![false; inst.n() + 1];
        visited[DEPOT] = true;
        Env {
            walk: Walk::start(inst),
            eta,
            visited,
            tour: vec![DEPOT],
            done: false,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.walk.inst
    }

    pub fn current(&self) -> usize {
        self.walk.current()
    }

    /// Time the episode is ready to leave the current node.
    pub fn decision_time(&self) -> Centi {
        self.walk.decision_time()
    }

    pub fn total_reward(&self) -> Centi {
        self.walk.total_reward()
    }

    pub fn total_time(&self) -> Centi {
        self.walk.arrival_time()
    }

    pub fn feasible(&self) -> bool {
        self.walk.feasible()
    }

    pub fn done(&self) -> bool {
        self.done
    }

    pub fn is_visited(&self, node: usize) -> bool {
        self.visited[node]
    }

    /// Nodes visited so far, leading depot included.
    pub fn partial_tour(&self) -> &[usize] {
        &self.tour
    }

    /// Travels to `next`; pass the depot to finish the episode.
    pub fn step(&mut self, next: usize) -> Result<StepOutcome> {
        if self.done {
            return Err(Error::Protocol(
                "episode is done; no further steps accepted".into(),
            ));
        }
        let n = self.instance().n();
        if next < 1 || next > n {
            return Err(Error::InvalidAction(format!("node {next} out of range")));
        }
        if next != DEPOT && self.visited[next] {
            return Err(Error::InvalidAction(format!("node {next} already visited")));
        }

        let step = self.walk.step(next, &mut self.eta);
        self.visited[next] = true;
        self.tour.push(next);
        self.done = step.done;
        Ok(StepOutcome {
            last_leg_time: step.leg_time,
            elapsed: step.arrival,
            reward: step.reward,
            penalty: step.penalty,
            feasible: self.walk.feasible(),
            done: step.done,
        })
    }

    /// Completes the episode tour to submission shape: the visited sequence,
    /// then the depot if the episode ended on a budget violation elsewhere,
    /// then all unvisited nodes in id order.
    pub fn submission_tour(&self) -> Vec<usize> {
        let n = self.instance().n();
        let mut tour = self.tour.clone();
        if tour[1..].iter().all(|&v| v != DEPOT) {
            tour.push(DEPOT);
        }
        for node in 2..=n {
            if !self.visited[node] {
                tour.push(node);
            }
        }
        tour
    }
}
