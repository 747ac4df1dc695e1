//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from a ChaCha stream keyed by
//! a master seed plus a purpose tag, so two streams with different tags never
//! overlap and a given `(seed, tag, index)` always replays the same draws.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate.
pub type StreamRng = ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_id(tag: &str, index: u64) -> u64 {
    let mut h = FNV_OFFSET;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(FNV_PRIME);
    }
    splitmix64(h ^ splitmix64(index))
}

/// Opens the stream `(master_seed, tag, index)`.
pub fn stream(master_seed: u64, tag: &str, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id(tag, index));
    rng
}

/// Derives a child seed, for nesting streams (trial -> segment -> ...).
pub fn child_seed(master_seed: u64, tag: &str, index: u64) -> u64 {
    stream(master_seed, tag, index).next_u64()
}
