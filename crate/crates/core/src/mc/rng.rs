//! Counter-based random streams.
//!
//! Every simulated path owns a ChaCha8 stream selected by `(key, index)`, so a
//! path's draws never depend on which worker produced it or in what order.
//! Keys for distinct purposes are split off a master seed with [`mix_seed`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child seed from `(seed, index)`.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// A family of independent streams indexed by `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn new(master: u64) -> Self {
        Self(master)
    }

    /// A sub-family for a separate purpose (outer states, inner paths of outer `i`, ...).
    pub fn derive(self, label: u64) -> Self {
        Self(mix_seed(self.0, label))
    }

    pub fn rng(self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(index);
        rng
    }

    pub fn seed(self) -> u64 {
        self.0
    }
}
