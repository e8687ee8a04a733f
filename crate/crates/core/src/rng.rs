//! Seedable, splittable random streams.
//!
//! Every sampling routine takes an explicit `&mut RngStream`. Parallel work
//! derives child streams with [`RngStream::split`], keyed by a tag path such
//! as `(N, block index)`, so results never depend on scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha12Rng,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child stream determined only by this stream's seed and `tag`.
    ///
    /// Splitting does not advance the parent.
    pub fn split(&self, tag: u64) -> Self {
        Self::new(splitmix64(self.seed ^ splitmix64(tag.wrapping_add(0xA5A5_5A5A))))
    }

    /// Child stream for a multi-level key, e.g. `[n_parties, block]`.
    pub fn split_path(&self, tags: &[u64]) -> Self {
        tags.iter().fold(self.clone(), |s, &t| s.split(t))
    }

    /// Fresh seed from OS entropy, for runs without a user-provided seed.
    pub fn entropy_seed() -> u64 {
        rand::random()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
