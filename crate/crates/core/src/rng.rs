//! Seeded randomness.
//!
//! Every random stream is a PCG-XSL-RR 128/64 generator ([`rand_pcg::Pcg64`])
//! seeded through SplitMix64, which makes streams reproducible across runs and
//! platforms. Independent streams for a `(page, iteration)` pair are derived
//! from a root seed with [`derive_seed`], so the result of any simulation does
//! not depend on the order in which pages are processed.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

pub type CrawlRng = Pcg64;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the stream identified by `(root, page, iteration)`:
/// `splitmix64(splitmix64(root ^ splitmix64(page)) ^ iteration)`.
pub fn derive_seed(root: u64, page: u64, iteration: u64) -> u64 {
    splitmix64(splitmix64(root ^ splitmix64(page)) ^ iteration)
}

pub fn rng_from_seed(seed: u64) -> CrawlRng {
    let lo = splitmix64(seed);
    let hi = splitmix64(lo);
    let mut bytes = [0u8; 32];
    // state from the first two words, stream selector from the next two
    bytes[..8].copy_from_slice(&lo.to_le_bytes());
    bytes[8..16].copy_from_slice(&hi.to_le_bytes());
    bytes[16..24].copy_from_slice(&splitmix64(hi).to_le_bytes());
    bytes[24..].copy_from_slice(&splitmix64(hi ^ GOLDEN).to_le_bytes());
    Pcg64::from_seed(bytes)
}

/// Forward partial Fisher-Yates: after the call `items[..k]` is a uniform
/// k-subset of `items` in draw order. The first `j < k` draws are the same as
/// those of a call with `k = j` on the same rng state.
pub fn partial_shuffle<T, R: Rng + ?Sized>(items: &mut [T], k: usize, rng: &mut R) {
    let n = items.len();
    for i in 0..k.min(n) {
        let j = rng.random_range(i..n);
        items.swap(i, j);
    }
}
