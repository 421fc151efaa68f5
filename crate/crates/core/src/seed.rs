//! Deterministic seed derivation for sweeps.
//!
//! Every random stream in an experiment is keyed by a path such as
//! `(master, point, graph)` or `(master, point, graph, rule, instance)`, so
//! results do not depend on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the stream at `path` below `master`.
pub fn child_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(master.wrapping_add(GOLDEN_GAMMA)), |acc, &step| {
        mix(acc ^ mix(step.wrapping_add(GOLDEN_GAMMA)))
    })
}

pub fn child_rng(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(child_seed(master, path))
}
