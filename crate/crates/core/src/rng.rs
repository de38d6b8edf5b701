//! Seeded random streams.
//!
//! Every random draw in the crate comes from [`SimRng`], a ChaCha8 stream
//! seeded with a 64-bit value. Per-run seeds are derived from a master seed
//! by folding indices through SplitMix64:
//!
//! ```text
//! h0 = splitmix64(master)
//! h1 = splitmix64(h0 ^ cell)
//! h2 = splitmix64(h1 ^ rep)
//! seed = splitmix64(h2 ^ stream)
//! ```
//!
//! so a run's stream depends only on its indices, never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used for graph generation and engine runs.
pub type SimRng = ChaCha8Rng;

/// Stream index for graph generation.
pub const STREAM_GRAPH: u64 = 0;
/// Stream index for the GREEDY engine.
pub const STREAM_GREEDY: u64 = 1;
/// Stream index for the MODIFIED GREEDY engine.
pub const STREAM_MODIFIED: u64 = 2;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of one stream of one repetition of one cell.
pub fn derive_seed(master: u64, cell: u64, rep: u64, stream: u64) -> u64 {
    let h = splitmix64(master);
    let h = splitmix64(h ^ cell);
    let h = splitmix64(h ^ rep);
    splitmix64(h ^ stream)
}

pub fn rng_from_seed(seed: u64) -> SimRng {
    SimRng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn splitmix_reference_values() {
        // First outputs of the reference SplitMix64 generator seeded with 0
        // are splitmix64(0), splitmix64(golden), ...
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
    }

    #[test]
    fn derived_seeds_differ_by_index() {
        let a = derive_seed(7, 0, 0, STREAM_GRAPH);
        let b = derive_seed(7, 0, 1, STREAM_GRAPH);
        let c = derive_seed(7, 1, 0, STREAM_GRAPH);
        let d = derive_seed(7, 0, 0, STREAM_GREEDY);
        assert!(a != b && a != c && a != d && b != c);
        assert_eq!(a, derive_seed(7, 0, 0, STREAM_GRAPH));
    }

    #[test]
    fn streams_are_reproducible() {
        let mut r1 = rng_from_seed(99);
        let mut r2 = rng_from_seed(99);
        let x: Vec<u64> = (0..8).map(|_| r1.gen()).collect();
        let y: Vec<u64> = (0..8).map(|_| r2.gen()).collect();
        assert_eq!(x, y);
    }
}
