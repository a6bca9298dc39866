//! Reproducible RNG streams.
//!
//! Every replicate of a run draws from its own counter-derived ChaCha stream,
//! so replicates are reproducible independently and in parallel.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// RNG for replicate `index` of the run seeded with `seed`.
pub fn replicate_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}
