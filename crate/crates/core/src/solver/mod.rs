//! Solvers for the single-instance tour optimization problem.
//!
//! * [`ea`] — multi-fidelity surrogate-assisted evolutionary search,
//! * [`iterative`] — arc-penalty surrogate with exact route optimization and
//!   GA refinement,
//! * [`random_search`] — budget-matched random baseline.

pub mod ea;
pub mod iterative;
mod random;

pub use random::{random_search, RandomSearchResult};
