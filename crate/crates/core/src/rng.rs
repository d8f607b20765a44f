//! Seeded, forkable randomness.
//!
//! One master seed per run; every independent unit of work (trial, shot,
//! sample) derives its own ChaCha20 stream so parallel execution cannot
//! change the outcome.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// RNG for a run with the given master seed.
pub fn master(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Derives an independent stream for work item `index` under `label`.
///
/// `label` separates the consumers (trials vs. per-sample streams) so index
/// collisions across loops cannot alias.
pub fn derive(seed: u64, label: &str, index: u64) -> ChaCha20Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in label.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ h);
    rng.set_stream(index);
    rng
}
