//! Deterministic random-number streams.
//!
//! All randomness in the crate flows from explicit 64-bit seeds through the
//! derivations below; there is no ambient entropy. The generator is
//! ChaCha8, which is portable, counter-based and supports 2^64 independent
//! streams per key, so every (seed, purpose, index) triple maps to its own
//! reproducible sequence on every platform.
//!
//! Layout of the 32-byte ChaCha key:
//!
//! ```text
//! bytes  0..8   seed          (little endian)
//! bytes  8..16  context id    (instance index, generation stage, ...)
//! bytes 16..32  ASCII domain tag, distinct per purpose
//! ```
//!
//! The stream counter carries the innermost index (Monte-Carlo sample,
//! episode step). Distinct keys or distinct stream counters give
//! independent sequences, so no two purposes ever share randomness.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG used everywhere in the crate.
pub type Rng = ChaCha8Rng;

fn keyed(seed: u64, context: u64, tag: &[u8; 16], stream: u64) -> Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&context.to_le_bytes());
    key[16..32].copy_from_slice(tag);
    let mut rng = Rng::from_seed(key);
    rng.set_stream(stream);
    rng
}

/// Stage of instance generation; each stage draws from its own substream so
/// a change in one stage never shifts the randomness of another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenStage {
    Coordinates,
    TimeWindows,
    Prizes,
}

/// Substream for one stage of generating one instance.
pub fn instance_stream(seed: u64, stage: GenStage) -> Rng {
    let stream = match stage {
        GenStage::Coordinates => 0,
        GenStage::TimeWindows => 1,
        GenStage::Prizes => 2,
    };
    keyed(seed, 0, b"opswtw/instance.", stream)
}

/// Independent stream for Monte-Carlo sample `sample_index` of instance
/// `instance_id` under `base_seed`.
///
/// Sharing `(base_seed, instance_id)` across tours and varying only the
/// sample index yields common random numbers: sample `j` realizes the same
/// noise sequence no matter which tour consumes it.
pub fn sample_stream(base_seed: u64, instance_id: u64, sample_index: u64) -> Rng {
    keyed(base_seed, instance_id, b"opswtw/simsample", sample_index)
}

/// Stream for solver-internal decisions (population init, operator draws).
pub fn solver_stream(seed: u64, context: u64) -> Rng {
    keyed(seed, context, b"opswtw/solverrng", 0)
}

/// Stream for sample `sample_index` of a solver's internal simulation batch
/// `batch`; disjoint from the scoring streams so solver-side measurement
/// never reuses official evaluation noise.
pub fn batch_sim_stream(seed: u64, batch: u64, sample_index: u64) -> Rng {
    keyed(seed, batch, b"opswtw/batch-sim", sample_index)
}

/// Stream for rollout `rollout_index` of a policy decision identified by
/// `decision_id`; independent from the committed environment's stream.
pub fn rollout_stream(seed: u64, decision_id: u64, rollout_index: u64) -> Rng {
    keyed(seed, decision_id, b"opswtw/rollouts.", rollout_index)
}
