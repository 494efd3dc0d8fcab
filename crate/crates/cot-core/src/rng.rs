//! Seeded stream derivation for reproducible, thread-count-independent sampling.
//!
//! Every replicate draws from its own counter-mode stream keyed by
//! `(seed, stream id)`, so results do not depend on how work is scheduled
//! across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// RNG for stream `stream` under the master `seed`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Collapses hierarchical indices (experiment, design, replicate, ...) into
/// one stream id. FNV-1a over the little-endian words.
pub fn stream_id(parts: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for part in parts {
        for byte in part.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Uniform draw on `[0, 1)` with the full 53-bit mantissa.
pub fn unit_uniform(rng: &mut dyn RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
}
