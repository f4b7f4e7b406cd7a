//! Seeded, counter-based random streams.
//!
//! Every stochastic routine draws from a ChaCha stream identified by
//! `(seed, stream)`. Work items (a sampled state, a block of cube points, a
//! tomography trial) own a stream index, so results do not depend on how the
//! items are distributed over worker shards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Environment variable that supplies the default seed to front ends.
pub const SEED_ENV: &str = "TRICOH_SEED";

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Pair of independent standard normals by the Box-Muller transform.
pub fn box_muller<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    // 1 - U lies in (0, 1], keeping ln finite
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let t = std::f64::consts::TAU * u2;
    (r * t.cos(), r * t.sin())
}

/// Splits `0..n` into `shards` contiguous ranges of near-equal length.
pub fn shard_ranges(n: u64, shards: usize) -> Vec<std::ops::Range<u64>> {
    let shards = shards.max(1) as u64;
    let base = n / shards;
    let extra = n % shards;
    let mut start = 0;
    (0..shards)
        .map(|k| {
            let len = base + u64::from(k < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}
