use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derives an independent generator for a named sub-stream of `seed`.
///
/// Sub-seeds are mixed with splitmix64 so that neighbouring streams share no
/// state and the derivation does not depend on evaluation order.
pub(crate) fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(stream.wrapping_add(0x9e37_79b9))))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
