//! Self-adaptive genome and permutation variation operators.
//!
//! A genome is a permutation of the active node set plus the depot-return
//! marker; everything before the marker is the visited part of the tour.
//! Operator choices and the mutation rate ride along as genes and are
//! themselves mutated and recombined.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::instance::DEPOT;
use crate::rng::Rng;

pub const Q_MIN: f64 = 0.01;
pub const Q_MAX: f64 = 0.5;

/// Recombination operators for permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecombOp {
    Cycle,
    Order,
    Position,
    AlternatingPosition,
}

pub const RECOMB_OPS: [RecombOp; 4] = [
    RecombOp::Cycle,
    RecombOp::Order,
    RecombOp::Position,
    RecombOp::AlternatingPosition,
];

/// Mutation operators for permutations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutateOp {
    Swap,
    Insert,
}

pub const MUTATE_OPS: [MutateOp; 2] = [MutateOp::Swap, MutateOp::Insert];

#[derive(Debug, Clone, PartialEq)]
pub struct Genome {
    /// Permutation of the active nodes plus the depot marker.
    pub seq: Vec<usize>,
    pub recomb: RecombOp,
    pub mutate: MutateOp,
    /// Per-position mutation rate, self-adapted.
    pub q: f64,
}

impl Genome {
    /// Random genome over `active` (non-depot active nodes), visiting at
    /// least two of them when possible.
    pub fn random(active: &[usize], rng: &mut Rng) -> Genome {
        let mut seq: Vec<usize> = active.to_vec();
        seq.push(DEPOT);
        seq.shuffle(rng);
        enforce_min_visits(&mut seq);
        Genome {
            seq,
            recomb: *RECOMB_OPS.choose(rng).unwrap(),
            mutate: *MUTATE_OPS.choose(rng).unwrap(),
            q: rng.gen_range(Q_MIN..=Q_MAX),
        }
    }

    /// Index of the depot marker.
    pub fn marker(&self) -> usize {
        self.seq.iter().position(|&v| v == DEPOT).unwrap()
    }

    /// Visited nodes, in order.
    pub fn visited(&self) -> &[usize] {
        let m = self.marker();
        &self.seq[..m]
    }
}

/// Moves the depot marker so at least two nodes are visited (tours visiting
/// fewer were exhaustively covered during dimensionality reduction).
pub fn enforce_min_visits(seq: &mut [usize]) {
    if seq.len() < 3 {
        return;
    }
    let marker = seq.iter().position(|&v| v == DEPOT).unwrap();
    if marker < 2 {
        seq.swap(marker, 2);
    }
}

/// Gene-level recombination: operators picked from a random parent, rate by
/// intermediate crossover; the tour comes from the child's own crossover op.
pub fn recombine(a: &Genome, b: &Genome, rng: &mut Rng) -> Genome {
    let recomb = if rng.gen_bool(0.5) { a.recomb } else { b.recomb };
    let mutate = if rng.gen_bool(0.5) { a.mutate } else { b.mutate };
    let q = 0.5 * (a.q + b.q);
    let mut seq = match recomb {
        RecombOp::Cycle => cycle_crossover(&a.seq, &b.seq, rng),
        RecombOp::Order => order_crossover(&a.seq, &b.seq, rng),
        RecombOp::Position => position_crossover(&a.seq, &b.seq, rng),
        RecombOp::AlternatingPosition => alternating_position_crossover(&a.seq, &b.seq),
    };
    enforce_min_visits(&mut seq);
    Genome {
        seq,
        recomb,
        mutate,
        q,
    }
}

/// Self-adaptive mutation: the rate moves by a lognormal step
/// `q' = q * exp(tau * z)`, operator genes re-roll with probability `p`, and
/// the permutation is varied at rate `q'` inside its active part.
pub fn mutate(genome: &mut Genome, tau: f64, p: f64, rng: &mut Rng) {
    let z = standard_normal(rng);
    genome.q = (genome.q * (tau * z).exp()).clamp(Q_MIN, Q_MAX);
    if rng.gen_bool(p) {
        genome.recomb = *RECOMB_OPS.choose(rng).unwrap();
    }
    if rng.gen_bool(p) {
        genome.mutate = *MUTATE_OPS.choose(rng).unwrap();
    }
    mutate_seq(&mut genome.seq, genome.mutate, genome.q, rng);
}

/// Applies the permutation operator at rate `q` to positions in the active
/// part (up to and including the marker); moves that would leave fewer than
/// two visited nodes are undone. Positions past the marker are never chosen
/// as the moved element, so mutations always touch the phenotype.
pub fn mutate_seq(seq: &mut Vec<usize>, op: MutateOp, q: f64, rng: &mut Rng) {
    let len = seq.len();
    if len < 3 {
        return;
    }
    for idx in 0..len {
        let marker = seq.iter().position(|&v| v == DEPOT).unwrap();
        if idx > marker {
            break;
        }
        if !rng.gen_bool(q) {
            continue;
        }
        let other = rng.gen_range(0..len);
        apply_move(seq, op, idx, other);
    }
}

/// One primitive variation move with its subject at `idx`; undone (returning
/// false) when it would leave fewer than two visited nodes.
pub fn apply_move(seq: &mut Vec<usize>, op: MutateOp, idx: usize, other: usize) -> bool {
    match op {
        MutateOp::Swap => {
            seq.swap(idx, other);
            if !min_visits_ok(seq) {
                seq.swap(idx, other);
                return false;
            }
        }
        MutateOp::Insert => {
            let v = seq.remove(idx);
            seq.insert(other, v);
            if !min_visits_ok(seq) {
                let v = seq.remove(other);
                seq.insert(idx, v);
                return false;
            }
        }
    }
    true
}

fn min_visits_ok(seq: &[usize]) -> bool {
    seq.iter().position(|&v| v == DEPOT).unwrap() >= 2
}

/// Box-Muller standard normal draw.
fn standard_normal(rng: &mut Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn position_of(seq: &[usize], max_node: usize) -> Vec<usize> {
    let mut pos = vec![usize::MAX; max_node + 1];
    for (i, &v) in seq.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

fn max_node(seq: &[usize]) -> usize {
    seq.iter().copied().max().unwrap_or(0)
}

/// Cycle crossover: positions are partitioned into cycles of the two
/// parents' assignments; cycles come alternately from each parent.
pub fn cycle_crossover(a: &[usize], b: &[usize], rng: &mut Rng) -> Vec<usize> {
    let n = a.len();
    let pos_a = position_of(a, max_node(a));
    let mut child = vec![usize::MAX; n];
    let mut assigned = vec![false; n];
    let mut from_a = rng.gen_bool(0.5);
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut i = start;
        loop {
            child[i] = if from_a { a[i] } else { b[i] };
            assigned[i] = true;
            i = pos_a[b[i]];
            if i == start {
                break;
            }
        }
        from_a = !from_a;
    }
    child
}

/// Order crossover (OX1): a window is copied from the first parent, the
/// rest is filled in second-parent order starting after the window,
/// wrapping around.
pub fn order_crossover(a: &[usize], b: &[usize], rng: &mut Rng) -> Vec<usize> {
    let n = a.len();
    let (lo, hi) = random_window(n, rng);
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; max_node(a) + 1];
    for i in lo..=hi {
        child[i] = a[i];
        used[a[i]] = true;
    }
    let mut fill = (hi + 1) % n;
    for k in 0..n {
        let v = b[(hi + 1 + k) % n];
        if !used[v] {
            child[fill] = v;
            used[v] = true;
            fill = (fill + 1) % n;
        }
    }
    child
}

/// Position-based crossover: a random set of positions keeps the first
/// parent's nodes; the remaining nodes fill the holes in second-parent
/// order.
pub fn position_crossover(a: &[usize], b: &[usize], rng: &mut Rng) -> Vec<usize> {
    let n = a.len();
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; max_node(a) + 1];
    for i in 0..n {
        if rng.gen_bool(0.5) {
            child[i] = a[i];
            used[a[i]] = true;
        }
    }
    let mut fill = b.iter().filter(|&&v| !used[v]);
    for slot in child.iter_mut() {
        if *slot == usize::MAX {
            *slot = *fill.next().unwrap();
        }
    }
    child
}

/// Alternating position crossover: take parents' elements alternately,
/// skipping those already placed.
pub fn alternating_position_crossover(a: &[usize], b: &[usize]) -> Vec<usize> {
    let n = a.len();
    let mut child = Vec::with_capacity(n);
    let mut used = vec![false; max_node(a) + 1];
    for k in 0..n {
        for v in [a[k], b[k]] {
            if !used[v] {
                child.push(v);
                used[v] = true;
            }
        }
    }
    child
}

fn random_window(n: usize, rng: &mut Rng) -> (usize, usize) {
    let i = rng.gen_range(0..n);
    let j = rng.gen_range(0..n);
    (i.min(j), i.max(j))
}
