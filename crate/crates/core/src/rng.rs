//! Seeded pseudo-random streams.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::{tail_mask, words_for, BitString};

/// A reproducible random stream: ChaCha8 keyed by a 64-bit seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl Prng {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64) -> Self {
        Prng {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 32-bit words consumed so far.
    pub fn stream_position(&self) -> u128 {
        self.inner.get_word_pos()
    }

    /// A uniformly random string of `width` bits.
    pub fn bits(&mut self, width: usize) -> BitString {
        let mut words = vec![0u64; words_for(width)];
        for w in &mut words {
            *w = self.inner.next_u64();
        }
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(width);
        }
        BitString::from_words(width, &words)
    }
}

impl RngCore for Prng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Derive an independent seed from `seed` and a salt (SplitMix64 finalizer).
pub fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(0x632b_e59b_d9b4_e019);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
