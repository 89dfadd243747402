use rand::Rng as _;

use super::*;
use crate::instance::{generate_instance, GenParams};
use crate::testutil::random_tour;

#[test]
fn identical_parents_reproduce_themselves() {
    let mut rng = solver_stream(60, 0);
    for _ in 0..50 {
        let p = random_tour(8, &mut rng)[1..].to_vec();
        let child = nwox(&p, &p, &mut rng);
        assert_eq!(child, p);
    }
}

#[test]
fn children_are_valid_permutations() {
    let mut rng = solver_stream(61, 0);
    for _ in 0..1000 {
        let a = random_tour(9, &mut rng)[1..].to_vec();
        let b = random_tour(9, &mut rng)[1..].to_vec();
        let child = nwox(&a, &b, &mut rng);
        let mut sorted = child.clone();
        sorted.sort_unstable();
        let mut expect = a.clone();
        expect.sort_unstable();
        assert_eq!(sorted, expect);
    }
}

/// Hand-worked construction: parents of length 8, window positions 3..=5.
/// The child copies 4 5 6 from the first parent and receives the second
/// parent's remaining nodes 8 2 1 7 3 in order, filled left to right.
#[test]
fn matches_hand_worked_fixture() {
    let a = vec![1, 2, 3, 4, 5, 6, 7, 8];
    let b = vec![8, 5, 2, 6, 1, 7, 4, 3];
    let child = nwox_crossover(&a, &b, 3, 5);
    assert_eq!(child, vec![8, 2, 1, 4, 5, 6, 7, 3]);
}

/// Order preservation: outside the window the child's nodes appear in
/// exactly the relative order they have in the donor parent.
#[test]
fn preserves_donor_order_outside_the_window() {
    let mut rng = solver_stream(62, 0);
    for _ in 0..1000 {
        let a = random_tour(10, &mut rng)[1..].to_vec();
        let b = random_tour(10, &mut rng)[1..].to_vec();
        let lo = rng.gen_range(0..a.len());
        let hi = rng.gen_range(lo..a.len());
        let child = nwox_crossover(&a, &b, lo, hi);
        let window: Vec<usize> = a[lo..=hi].to_vec();
        let outside: Vec<usize> = child
            .iter()
            .enumerate()
            .filter(|(i, _)| *i < lo || *i > hi)
            .map(|(_, &v)| v)
            .collect();
        let donor_order: Vec<usize> = b
            .iter()
            .copied()
            .filter(|v| !window.contains(v))
            .collect();
        assert_eq!(outside, donor_order);
        assert_eq!(&child[lo..=hi], &window[..]);
    }
}

#[test]
fn ga_never_loses_the_best_seed() {
    let inst = generate_instance(&GenParams::new(7, 40), 2).unwrap();
    // seed with every single-node route; the GA may only improve on them
    let seeds: Vec<Vec<usize>> = (2..=7).map(|v| vec![v]).collect();
    let cfg = GaConfig {
        population: 40,
        generations: 3,
        evals: 60,
        parents: 10,
        elites: 3,
        tournament: 3,
    };
    let result = ga_improve(&inst, &seeds, &cfg, 5).unwrap();
    // best seed mean, measured on the same common random numbers
    let mut cache = EvalCache::new(&inst, 5);
    let best_seed = seeds
        .iter()
        .map(|s| cache.estimate(s, cfg.evals).0.mean())
        .fold(f64::MIN, f64::max);
    assert!(
        result.mean + 1e-12 >= best_seed,
        "{} < {best_seed}",
        result.mean
    );
}

#[test]
fn seeds_fill_the_population_exactly_when_sized_to_match() {
    let mut rng = solver_stream(63, 0);
    let seeds: Vec<Vec<usize>> = (0..6)
        .map(|_| {
            let t = random_tour(6, &mut rng);
            t[1..].iter().copied().take_while(|&v| v != 1).collect()
        })
        .collect();
    let cfg = GaConfig {
        population: 6,
        ..GaConfig::default()
    };
    let population = initial_population(6, &seeds, &cfg, &mut rng);
    assert_eq!(population.len(), 6);
    for (suffix, visited) in population.iter().zip(&seeds) {
        assert_eq!(&visited_of(suffix), visited);
    }
}

#[test]
fn ga_is_deterministic() {
    let inst = generate_instance(&GenParams::new(6, 60), 9).unwrap();
    let seeds = vec![vec![2, 3], vec![4]];
    let cfg = GaConfig {
        population: 30,
        generations: 2,
        evals: 40,
        parents: 8,
        elites: 2,
        tournament: 2,
    };
    let a = ga_improve(&inst, &seeds, &cfg, 3).unwrap();
    let b = ga_improve(&inst, &seeds, &cfg, 3).unwrap();
    assert_eq!(a, b);
}
