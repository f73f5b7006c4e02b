use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

pub type TrialRng = Xoshiro256PlusPlus;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer; a bijection on `u64`.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `index` of a run with `master_seed`.
///
/// For a fixed master seed the map `index -> seed` is a bijection, so
/// distinct trials never share a seed.
pub fn derive_trial_seed(master_seed: u64, index: u64) -> u64 {
    mix(mix(master_seed ^ GOLDEN).wrapping_add(mix(index.wrapping_mul(GOLDEN) ^ 0x5851_f42d_4c95_7f2d)))
}

pub fn trial_rng(master_seed: u64, index: u64) -> TrialRng {
    TrialRng::seed_from_u64(derive_trial_seed(master_seed, index))
}

/// One uniform draw in `[0, 1)` compared against `p`. Using the same draw
/// for every `p` couples runs at different densities.
#[inline]
pub fn uniform_below(rng: &mut TrialRng, p: f64) -> bool {
    unit_draw(rng) < p
}

/// Uniform in `[0, 1)` with 53 random bits.
#[inline]
pub fn unit_draw(rng: &mut TrialRng) -> f64 {
    ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64)
}
