//! Shared fixtures for unit tests.

use rand::seq::SliceRandom;

use crate::instance::{parse_instance_str, Instance};
use crate::rng::Rng;

/// The four-node worked example as file contents.
pub const SAMPLE_INSTANCE_FILE: &str = "\
CUSTNO XCOORD YCOORD TW_LOW TW_HIGH PRIZE MAX_T
1 47 24 0 285 0.0 256
2 38 15 102 198 0.19 256
3 53 49 9 52 0.38 256
4 116 23 30 137 1.0 256
";

pub fn sample_instance() -> Instance {
    parse_instance_str("sample", SAMPLE_INSTANCE_FILE).unwrap()
}

/// Uniformly random submission-shaped tour: `[1]` followed by a shuffled
/// permutation of all nodes.
pub fn random_tour(n: usize, rng: &mut Rng) -> Vec<usize> {
    let mut suffix: Vec<usize> = (1..=n).collect();
    suffix.shuffle(rng);
    let mut tour = Vec::with_capacity(n + 1);
    tour.push(1);
    tour.extend(suffix);
    tour
}
