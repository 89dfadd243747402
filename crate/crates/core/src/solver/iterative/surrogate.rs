//! Arc-penalty surrogate model and its exact optimizer.
//!
//! The model scores a depot-rooted route by the sum of `r_j + p_ij` over its
//! arcs, where `r_j` is node `j`'s prize and `p_ij` is a learned (negative)
//! arc penalty. Routes are size-capped: a route visiting `k` nodes uses
//! `k + 1` arcs including the closing return arc, so the smallest cap 2
//! admits exactly the single-node routes. The optimizer is a best-first
//! branch-and-bound whose admissible bound adds the best possible remaining
//! arc scores.

use std::collections::BinaryHeap;

use indexmap::IndexSet;

use crate::error::{Error, Result};
use crate::instance::{Instance, DEPOT};

/// Learned surrogate state: penalties, cuts, removals and the route cap.
pub struct SurrogateState {
    n: usize,
    /// Per-node reward (prize), depot zero.
    reward: Vec<f64>,
    penalty_sum: Vec<f64>,
    penalty_count: Vec<u32>,
    removed_node: Vec<bool>,
    removed_arc: Vec<bool>,
    /// Complete routes (visited sequences) that may not be produced again.
    cut_solutions: IndexSet<Vec<usize>>,
    /// Arc sequences forbidden as contiguous sub-routes.
    cut_structures: Vec<Vec<(usize, usize)>>,
    /// Maximum number of arcs per route, return arc included.
    pub max_route_size: usize,
}

impl SurrogateState {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.n();
        let reward = (1..=n)
            .map(|v| if v == DEPOT { 0.0 } else { inst.prize(v).as_f64() })
            .collect();
        SurrogateState {
            n,
            reward,
            penalty_sum: vec![0.0; n * n],
            penalty_count: vec![0; n * n],
            removed_node: vec![false; n + 1],
            removed_arc: vec![false; n * n],
            cut_solutions: IndexSet::new(),
            cut_structures: Vec::new(),
            max_route_size: 2,
        }
    }

    fn arc_idx(&self, i: usize, j: usize) -> usize {
        (i - 1) * self.n + (j - 1)
    }

    /// Average registered penalty share of arc `(i, j)`; zero before any
    /// registration.
    pub fn arc_penalty(&self, i: usize, j: usize) -> f64 {
        let idx = self.arc_idx(i, j);
        if self.penalty_count[idx] == 0 {
            0.0
        } else {
            self.penalty_sum[idx] / self.penalty_count[idx] as f64
        }
    }

    /// Objective contribution of traversing `(i, j)`.
    pub fn arc_score(&self, i: usize, j: usize) -> f64 {
        self.reward[j - 1] + self.arc_penalty(i, j)
    }

    pub fn remove_node(&mut self, v: usize) {
        self.removed_node[v] = true;
    }

    pub fn remove_arc(&mut self, i: usize, j: usize) {
        let idx = self.arc_idx(i, j);
        self.removed_arc[idx] = true;
    }

    pub fn is_node_removed(&self, v: usize) -> bool {
        self.removed_node[v]
    }

    /// Registers a simulated total penalty of a route: every arc except the
    /// return to the depot receives an equal share, and each arc's penalty
    /// is the running average of its registered shares.
    pub fn register_penalty(&mut self, visited: &[usize], total_penalty: f64) {
        if visited.is_empty() {
            return;
        }
        let share = total_penalty / visited.len() as f64;
        let mut prev = DEPOT;
        for &v in visited {
            let idx = self.arc_idx(prev, v);
            self.penalty_sum[idx] += share;
            self.penalty_count[idx] += 1;
            prev = v;
        }
    }

    /// Forbids this exact route from being produced again.
    pub fn cut_solution(&mut self, visited: Vec<usize>) {
        self.cut_solutions.insert(visited);
    }

    /// Forbids the route's arc sequence (return arc excluded) as a
    /// contiguous sub-route of any future solution.
    pub fn cut_structure(&mut self, visited: &[usize]) {
        if visited.is_empty() {
            return;
        }
        let mut arcs = Vec::with_capacity(visited.len());
        let mut prev = DEPOT;
        for &v in visited {
            arcs.push((prev, v));
            prev = v;
        }
        self.cut_structures.push(arcs);
    }

    pub fn cut_counts(&self) -> (usize, usize) {
        (self.cut_solutions.len(), self.cut_structures.len())
    }

    /// Non-removed non-depot nodes.
    pub fn available_nodes(&self) -> usize {
        (2..=self.n).filter(|&v| !self.removed_node[v]).count()
    }
}

struct HeapNode {
    bound: f64,
    order: u64,
    value: f64,
    current: usize,
    visited: Vec<usize>,
}

impl PartialEq for HeapNode {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.order == other.order
    }
}
impl Eq for HeapNode {}
impl PartialOrd for HeapNode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapNode {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap on bound; earlier insertions win ties for determinism
        self.bound
            .total_cmp(&other.bound)
            .then(other.order.cmp(&self.order))
    }
}

const EPS: f64 = 1e-9;

/// Exact optimum of the surrogate: the best depot-rooted cycle-free route
/// with at most `max_route_size` arcs that is neither a cut solution nor
/// contains a cut structure. `Err(Exhausted)` when every route is cut.
pub fn solve_surrogate_model(state: &SurrogateState) -> Result<(Vec<usize>, f64)> {
    search(state, false)
}

/// The same optimum with all penalties treated as zero: an upper bound on
/// any route's expected reward under the current cuts and cap.
pub fn upper_bound(state: &SurrogateState) -> Result<f64> {
    search(state, true).map(|(_, value)| value)
}

fn search(state: &SurrogateState, ignore_penalties: bool) -> Result<(Vec<usize>, f64)> {
    if state.max_route_size < 2 {
        return Err(Error::InvalidInput(format!(
            "max route size {} below 2",
            state.max_route_size
        )));
    }
    let n = state.n;
    let score = |i: usize, j: usize| {
        if ignore_penalties {
            state.reward[j - 1]
        } else {
            state.arc_score(i, j)
        }
    };

    // Admissible per-node caps: the best score any incoming arc could give.
    let mut cap = vec![f64::NEG_INFINITY; n + 1];
    for v in 2..=n {
        if state.removed_node[v] {
            continue;
        }
        for u in 1..=n {
            if u != v && !state.removed_node[u] && !state.removed_arc[state.arc_idx(u, v)] {
                cap[v] = cap[v].max(score(u, v));
            }
        }
    }

    let bound_from = |value: f64, visited: &[usize], slots: usize| {
        let mut caps: Vec<f64> = (2..=n)
            .filter(|&v| {
                !state.removed_node[v] && !visited.contains(&v) && cap[v] > 0.0
            })
            .map(|v| cap[v])
            .collect();
        caps.sort_by(|a, b| b.total_cmp(a));
        value + caps.iter().take(slots).sum::<f64>()
    };

    let mut heap = BinaryHeap::new();
    let mut counter = 0u64;
    let slots_root = state.max_route_size - 1;
    heap.push(HeapNode {
        bound: bound_from(0.0, &[], slots_root),
        order: 0,
        value: 0.0,
        current: DEPOT,
        visited: Vec::new(),
    });

    let mut best: Option<(Vec<usize>, f64)> = None;

    while let Some(node) = heap.pop() {
        if let Some((_, best_value)) = &best {
            if node.bound <= best_value + EPS {
                break;
            }
        }

        // Complete by returning to the depot.
        if !node.visited.is_empty()
            && !state.removed_arc[state.arc_idx(node.current, DEPOT)]
        {
            let value = node.value + score(node.current, DEPOT);
            let better = best
                .as_ref()
                .map_or(true, |(_, bv)| value > bv + EPS);
            if better && !state.cut_solutions.contains(&node.visited) {
                best = Some((node.visited.clone(), value));
            }
        }

        // Expand: one more node plus the reserved return arc must fit.
        if node.visited.len() + 2 > state.max_route_size {
            continue;
        }
        for next in 2..=n {
            if state.removed_node[next]
                || node.visited.contains(&next)
                || state.removed_arc[state.arc_idx(node.current, next)]
            {
                continue;
            }
            let mut visited = node.visited.clone();
            visited.push(next);
            if hits_structure(state, &visited) {
                continue;
            }
            let value = node.value + score(node.current, next);
            let slots = state.max_route_size - visited.len() - 1;
            let bound = bound_from(value, &visited, slots);
            if let Some((_, bv)) = &best {
                if bound <= bv + EPS {
                    continue;
                }
            }
            counter += 1;
            heap.push(HeapNode {
                bound,
                order: counter,
                value,
                current: next,
                visited,
            });
        }
    }

    best.ok_or(Error::Exhausted)
}

/// Does the partial route's arc sequence end with any forbidden structure?
/// Checked on every extension, so any contiguous occurrence is caught.
fn hits_structure(state: &SurrogateState, visited: &[usize]) -> bool {
    'outer: for structure in &state.cut_structures {
        let k = structure.len();
        if visited.len() < k {
            continue;
        }
        // reconstruct the last k arcs of [depot, visited...]
        let full_len = visited.len();
        for (offset, &(si, sj)) in structure.iter().enumerate() {
            let pos = full_len - k + offset;
            let from = if pos == 0 { DEPOT } else { visited[pos - 1] };
            let to = visited[pos];
            if (from, to) != (si, sj) {
                continue 'outer;
            }
        }
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixed::Centi;
    use crate::rng::solver_stream;
    use crate::testutil::sample_instance;
    use rand::Rng as _;

    /// Exhaustive reference optimizer over all small routes.
    fn enumerate_best(
        state: &SurrogateState,
        n: usize,
        ignore_penalties: bool,
    ) -> Option<(Vec<usize>, f64)> {
        let mut best: Option<(Vec<usize>, f64)> = None;
        let mut stack: Vec<Vec<usize>> = vec![vec![]];
        while let Some(seq) = stack.pop() {
            if !seq.is_empty() && seq.len() + 1 <= state.max_route_size {
                let mut value = 0.0;
                let mut prev = DEPOT;
                let mut blocked = state.cut_solutions.contains(&seq);
                let mut arcs = Vec::new();
                for &v in &seq {
                    if state.removed_node[v] || state.removed_arc[state.arc_idx(prev, v)] {
                        blocked = true;
                    }
                    value += if ignore_penalties {
                        state.reward[v - 1]
                    } else {
                        state.arc_score(prev, v)
                    };
                    arcs.push((prev, v));
                    prev = v;
                }
                if state.removed_arc[state.arc_idx(prev, DEPOT)] {
                    blocked = true;
                }
                value += if ignore_penalties {
                    0.0
                } else {
                    state.arc_penalty(prev, DEPOT)
                };
                for structure in &state.cut_structures {
                    if structure.len() <= arcs.len() {
                        for w in arcs.windows(structure.len()) {
                            if w == structure.as_slice() {
                                blocked = true;
                            }
                        }
                    }
                }
                if !blocked && best.as_ref().map_or(true, |(_, bv)| value > bv + EPS) {
                    best = Some((seq.clone(), value));
                }
            }
            if seq.len() + 2 <= state.max_route_size {
                for v in 2..=n {
                    if !seq.contains(&v) {
                        let mut next = seq.clone();
                        next.push(v);
                        stack.push(next);
                    }
                }
            }
        }
        best
    }

    #[test]
    fn zero_penalties_size_two_picks_the_best_prize() {
        let inst = sample_instance();
        let state = SurrogateState::new(&inst);
        let (route, value) = solve_surrogate_model(&state).unwrap();
        assert_eq!(route, vec![4]); // prize 1.00
        assert!((value - 1.0).abs() < EPS);
    }

    #[test]
    fn matches_enumeration_on_the_sample_instance() {
        let inst = sample_instance();
        let mut state = SurrogateState::new(&inst);
        state.max_route_size = 3;
        let (route, value) = solve_surrogate_model(&state).unwrap();
        let (_, value_e) = enumerate_best(&state, 4, false).unwrap();
        assert!((value - value_e).abs() < EPS);
        // ties on value are possible (both visit orders of the same pair),
        // so check the returned route actually achieves the optimum
        let mut check = 0.0;
        let mut prev = DEPOT;
        for &v in &route {
            check += state.arc_score(prev, v);
            prev = v;
        }
        assert!((check + state.arc_penalty(prev, DEPOT) - value_e).abs() < EPS);
    }

    #[test]
    fn cutting_the_optimum_yields_the_second_best() {
        let inst = sample_instance();
        let mut state = SurrogateState::new(&inst);
        state.max_route_size = 3;
        let (first, _) = solve_surrogate_model(&state).unwrap();
        state.cut_solution(first.clone());
        let (second, value) = solve_surrogate_model(&state).unwrap();
        assert_ne!(first, second);
        let (_, value_e) = enumerate_best(&state, 4, false).unwrap();
        assert!((value - value_e).abs() < EPS);
    }

    #[test]
    fn exhausts_when_everything_is_cut() {
        let inst = Instance::from_parts(
            vec![0, 10],
            vec![0, 0],
            vec![0, 0],
            vec![100, 100],
            vec![Centi(0), Centi(50)],
            40,
        )
        .unwrap();
        let mut state = SurrogateState::new(&inst);
        state.cut_solution(vec![2]);
        assert!(matches!(
            solve_surrogate_model(&state),
            Err(Error::Exhausted)
        ));
    }

    #[test]
    fn matches_enumeration_on_random_states() {
        let mut rng = solver_stream(71, 0);
        for trial in 0..60 {
            let n = rng.gen_range(4..=8);
            let x: Vec<i64> = (0..n).map(|_| rng.gen_range(0..100)).collect();
            let y: Vec<i64> = (0..n).map(|_| rng.gen_range(0..50)).collect();
            let prizes: Vec<Centi> = (0..n)
                .map(|i| if i == 0 { Centi(0) } else { Centi(rng.gen_range(1..=100)) })
                .collect();
            let inst = Instance::from_parts(
                x,
                y,
                vec![0; n],
                vec![1000; n],
                prizes,
                500,
            )
            .unwrap();
            let mut state = SurrogateState::new(&inst);
            state.max_route_size = rng.gen_range(2..=n + 1);
            // random penalties, cuts, removals
            for _ in 0..rng.gen_range(0..12) {
                let len = rng.gen_range(1..n.min(4));
                let mut visited = Vec::new();
                for _ in 0..len {
                    let v = rng.gen_range(2..=n);
                    if !visited.contains(&v) {
                        visited.push(v);
                    }
                }
                state.register_penalty(&visited, -(rng.gen_range(0..300) as f64) / 100.0);
                match rng.gen_range(0..3) {
                    0 => state.cut_solution(visited),
                    1 => state.cut_structure(&visited),
                    _ => {}
                }
            }
            if rng.gen_bool(0.3) {
                state.remove_node(rng.gen_range(2..=n));
            }
            if rng.gen_bool(0.3) {
                let i = rng.gen_range(1..=n);
                let j = rng.gen_range(2..=n);
                if i != j {
                    state.remove_arc(i, j);
                }
            }

            let bb = solve_surrogate_model(&state);
            let reference = enumerate_best(&state, n, false);
            match (bb, reference) {
                (Ok((route, value)), Some((route_e, value_e))) => {
                    assert!(
                        (value - value_e).abs() < 1e-6,
                        "trial {trial}: {value} vs {value_e} ({route:?} vs {route_e:?})"
                    );
                }
                (Err(Error::Exhausted), None) => {}
                (got, want) => panic!("trial {trial}: {got:?} vs {want:?}"),
            }

            // the penalty-free optimum bounds the penalized one
            if let (Ok(ub), Ok((_, penalized))) =
                (upper_bound(&state), solve_surrogate_model(&state))
            {
                assert!(ub + 1e-9 >= penalized, "{ub} < {penalized}");
            }
        }
    }

    #[test]
    fn upper_bound_is_monotone_in_route_size() {
        let inst = sample_instance();
        let mut state = SurrogateState::new(&inst);
        let mut prev = f64::NEG_INFINITY;
        for size in 2..=5 {
            state.max_route_size = size;
            let ub = upper_bound(&state).unwrap();
            assert!(ub + EPS >= prev);
            prev = ub;
        }
    }

    #[test]
    fn penalty_shares_average_over_registrations() {
        let inst = sample_instance();
        let mut state = SurrogateState::new(&inst);
        // route 1 -> 2 -> 3 -> 1 has two scored arcs; penalty -2 gives each -1
        state.register_penalty(&[2, 3], -2.0);
        assert!((state.arc_penalty(1, 2) + 1.0).abs() < EPS);
        assert!((state.arc_penalty(2, 3) + 1.0).abs() < EPS);
        assert_eq!(state.arc_penalty(3, 1), 0.0); // return arc never shares
        // second registration of -3 (share -1.5 over two arcs... use a
        // single-arc route: share is the whole penalty)
        state.register_penalty(&[2], -3.0);
        assert!((state.arc_penalty(1, 2) + 2.0).abs() < EPS);
        // zero-penalty registration pulls the average toward zero
        state.register_penalty(&[2], 0.0);
        assert!((state.arc_penalty(1, 2) + 4.0 / 3.0).abs() < EPS);
    }

    use crate::instance::Instance;
}
