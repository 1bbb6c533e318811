//! Counter-based random streams: one independent stream per sample index.
//!
//! The ChaCha key is derived from the run seed and the stream id is the sample
//! index, so sample `i` sees the same draws no matter which worker evaluates
//! it or in which order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

/// Random source for sample `index` of a run seeded with `seed`.
pub fn sample_index_rng(seed: u64, index: u64) -> SampleRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
