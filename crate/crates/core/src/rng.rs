//! Seeded randomness.
//!
//! Every random draw in the simulation flows from one 64-bit seed. Each
//! subsystem gets its own counter-based stream so that the order in which
//! modules are stepped can never perturb another module's draws. Streams
//! snapshot to a single word position, which makes save/load bit-exact.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Named substreams. The discriminant is the ChaCha stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Weather = 1,
    Placement = 2,
    Particles = 3,
    Lightning = 4,
}

/// Deterministic RNG for one substream.
pub fn substream(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Snapshot of a substream: everything needed to rebuild it besides the seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamState {
    pub stream: u64,
    pub word_pos: u128,
}

pub fn snapshot(rng: &ChaCha8Rng) -> StreamState {
    StreamState { stream: rng.get_stream(), word_pos: rng.get_word_pos() }
}

pub fn restore(seed: u64, state: StreamState) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(state.stream);
    rng.set_word_pos(state.word_pos);
    rng
}

/// SplitMix64 finalizer; used to derive per-cell seeds from coordinates so
/// unloaded pages can be regenerated without any retained stream state.
pub fn mix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Combine a seed with up to three coordinates into a fresh derived seed.
pub fn derive_seed(seed: u64, a: u64, b: u64, c: u64) -> u64 {
    mix(seed ^ mix(a ^ mix(b ^ mix(c))))
}
