//! Problem instances: node coordinates, time windows, prizes, travel-time
//! matrix and the tour budget, plus seeded generation and file I/O.
//!
//! Node ids are 1-based everywhere in the public API; node 1 is the depot.

mod gen;
mod io;

pub use gen::{
    compute_distance_matrix, generate_instance, generate_prizes_and_budget, generate_time_windows,
    nearest_neighbor_cost, second_nearest_neighbor_tour, GenParams, ALLOWED_WINDOW_SIZES,
};
pub use io::{parse_instance_str, read_instance, write_instance, INSTANCE_HEADER};

use crate::error::{Error, Result};
use crate::fixed::Centi;

/// The depot's node id.
pub const DEPOT: usize = 1;

/// Symmetric matrix of maximum travel times (rounded Euclidean distances).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistMatrix {
    n: usize,
    data: Vec<i64>,
}

impl DistMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Maximum travel time between nodes `i` and `j` (1-based ids).
    pub fn get(&self, i: usize, j: usize) -> i64 {
        debug_assert!(i >= 1 && i <= self.n && j >= 1 && j <= self.n);
        self.data[(i - 1) * self.n + (j - 1)]
    }

    fn from_rows(n: usize, data: Vec<i64>) -> Self {
        debug_assert_eq!(data.len(), n * n);
        DistMatrix { n, data }
    }
}

/// One problem instance.
///
/// Fields are kept private so the distance matrix always agrees with the
/// coordinates; construct via [`generate_instance`], [`read_instance`] or
/// [`Instance::from_parts`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    x: Vec<i64>,
    y: Vec<i64>,
    open: Vec<i64>,
    close: Vec<i64>,
    prize: Vec<Centi>,
    t_max: i64,
    dist: DistMatrix,
}

impl Instance {
    /// Builds an instance from raw per-node data, recomputing the travel-time
    /// matrix from the coordinates.
    pub fn from_parts(
        x: Vec<i64>,
        y: Vec<i64>,
        open: Vec<i64>,
        close: Vec<i64>,
        prize: Vec<Centi>,
        t_max: i64,
    ) -> Result<Instance> {
        let n = x.len();
        if [y.len(), open.len(), close.len(), prize.len()] != [n, n, n, n] {
            return Err(Error::InvalidInput(
                "per-node vectors must have equal length".into(),
            ));
        }
        let dist = compute_distance_matrix(&x, &y)?;
        Ok(Instance {
            x,
            y,
            open,
            close,
            prize,
            t_max,
            dist,
        })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self, node: usize) -> i64 {
        self.x[node - 1]
    }

    pub fn y(&self, node: usize) -> i64 {
        self.y[node - 1]
    }

    /// Time-window opening time `l_i`.
    pub fn open(&self, node: usize) -> i64 {
        self.open[node - 1]
    }

    /// Time-window closing time `h_i`.
    pub fn close(&self, node: usize) -> i64 {
        self.close[node - 1]
    }

    pub fn prize(&self, node: usize) -> Centi {
        self.prize[node - 1]
    }

    /// Tour budget `T` in whole time units.
    pub fn t_max(&self) -> i64 {
        self.t_max
    }

    /// Maximum travel time between `i` and `j`.
    pub fn dist(&self, i: usize, j: usize) -> i64 {
        self.dist.get(i, j)
    }

    pub fn dist_matrix(&self) -> &DistMatrix {
        &self.dist
    }

    /// Sum of all prizes; upper bound for any tour reward.
    pub fn prize_sum(&self) -> Centi {
        self.prize.iter().copied().sum()
    }

    pub fn max_depot_dist(&self) -> i64 {
        (2..=self.n()).map(|j| self.dist.get(DEPOT, j)).max().unwrap_or(0)
    }

    /// Checks the intrinsic invariants that every *generated* instance
    /// satisfies. Hand-written instance files may legitimately fail this.
    pub fn validate_generated(&self) -> Result<()> {
        let n = self.n();
        let fail = |msg: String| Err(Error::InvalidInput(msg));

        let recomputed = compute_distance_matrix(&self.x, &self.y)?;
        if recomputed != self.dist {
            return fail("distance matrix does not match coordinates".into());
        }

        // Windows bracket the second-nearest-neighbor visit times.
        let (order, times) = second_nearest_neighbor_tour(&self.dist);
        for (pos, &node) in order.iter().enumerate().skip(1) {
            let t = times[pos];
            if !(self.open(node) <= t && t <= self.close(node)) {
                return fail(format!(
                    "window [{}, {}] of node {node} misses its visit time {t}",
                    self.open(node),
                    self.close(node)
                ));
            }
            if self.open(node) < 0 {
                return fail(format!("negative opening time at node {node}"));
            }
        }

        // Depot row.
        let max_visit = times.iter().copied().max().unwrap_or(0);
        if self.open(DEPOT) != 0 {
            return fail("depot opening time must be 0".into());
        }
        let w = self.close(DEPOT) - max_visit;
        if !ALLOWED_WINDOW_SIZES.contains(&w) {
            return fail(format!(
                "depot closing time {} is not max visit time {max_visit} plus an allowed window size",
                self.close(DEPOT)
            ));
        }
        if self.prize(DEPOT) != Centi::ZERO {
            return fail("depot prize must be 0".into());
        }

        // Prize formula reproduces the stored prizes exactly.
        let dmax = self.max_depot_dist();
        if dmax == 0 {
            return fail("all nodes coincide with the depot".into());
        }
        for node in 2..=n {
            let expect = Centi(1 + 99 * self.dist.get(DEPOT, node) / dmax);
            if self.prize(node) != expect {
                return fail(format!(
                    "prize {} of node {node} differs from recomputed {expect}",
                    self.prize(node)
                ));
            }
            if self.prize(node) < Centi(1) || self.prize(node) > Centi(100) {
                return fail(format!("prize of node {node} outside (0, 1]"));
            }
        }

        // Budget bounds bracket the stored budget.
        let t_min = 2 * dmax;
        let nn = nearest_neighbor_cost(&self.dist);
        let t_max_bound = (2 * t_min).max((nn + 1) / 2);
        if !(t_min <= self.t_max && self.t_max <= t_max_bound) {
            return fail(format!(
                "budget {} outside [{t_min}, {t_max_bound}]",
                self.t_max
            ));
        }
        Ok(())
    }
}
