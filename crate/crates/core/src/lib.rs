//! Benchmark stack for the orienteering problem with stochastic weights and
//! time windows (OPSWTW).
//!
//! A tour starts at the depot (node 1), collects prizes at nodes it reaches
//! inside their time windows, and must return to the depot without exceeding
//! the travel-time budget `T`. Travel times are stochastic: the known
//! node-to-node distances are *maximum* travel times, and each traversal
//! realizes a uniformly scaled fraction of the maximum.
//!
//! The crate provides:
//!
//! * [`instance`] — seeded instance generation and file I/O,
//! * [`sim`] — the stochastic simulator (full-tour checking and a stepwise
//!   environment),
//! * [`scoring`] — tour scores, Monte-Carlo evaluation, submissions, ranking
//!   and a brute-force oracle for small instances,
//! * [`solver`] — a multi-fidelity surrogate-assisted evolutionary solver, an
//!   iterative arc-penalty surrogate solver with GA refinement, and a random
//!   search baseline,
//! * [`policy`] — adaptive stepwise construction with Monte-Carlo rollouts.
//!
//! All times and rewards are multiples of 0.01, so the crate computes in
//! exact fixed-point arithmetic ([`fixed::Centi`]); results are bit-stable
//! across runs, platforms and parallelism levels.

pub mod error;
#[cfg(test)]
pub(crate) mod testutil;
pub mod fixed;
pub mod instance;
pub mod policy;
pub mod rng;
pub mod scoring;
pub mod sim;
pub mod solver;

pub use error::{Error, Result};
pub use fixed::Centi;
pub use instance::Instance;
