//! Seed streams.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`), a
//! counter-based generator whose output is specified bit-for-bit and does not
//! depend on platform or word size. A stream is identified by a root seed, an
//! experiment id and a replicate number; the 256-bit ChaCha key is derived from
//! those three with SplitMix64 over an FNV-1a digest of the experiment id.
//! Call sites that need several independent generators within one replicate
//! take [`RngSeed::rng_for`] with a distinct purpose tag.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub experiment: String,
    pub replicate: u64,
}

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        RngSeed {
            seed,
            experiment: String::new(),
            replicate: 0,
        }
    }

    pub fn stream(seed: u64, experiment: impl Into<String>, replicate: u64) -> Self {
        RngSeed {
            seed,
            experiment: experiment.into(),
            replicate,
        }
    }

    pub fn with_replicate(&self, replicate: u64) -> Self {
        RngSeed {
            replicate,
            ..self.clone()
        }
    }

    /// Child stream whose experiment id is extended by `/tag`.
    pub fn child(&self, tag: &str) -> Self {
        let experiment = if self.experiment.is_empty() {
            tag.to_string()
        } else {
            format!("{}/{}", self.experiment, tag)
        };
        RngSeed {
            seed: self.seed,
            experiment,
            replicate: self.replicate,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        self.rng_for("")
    }

    pub fn rng_for(&self, purpose: &str) -> ChaCha8Rng {
        let mut state = self.seed
            ^ fnv1a(self.experiment.as_bytes()).rotate_left(17)
            ^ self.replicate.wrapping_mul(0xD1B5_4A32_D192_ED03)
            ^ fnv1a(purpose.as_bytes()).rotate_left(41);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        ChaCha8Rng::from_seed(key)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in the open interval (0, 1) from the top 53 bits.
pub(crate) fn open_unit<R: rand::RngCore>(rng: &mut R) -> f64 {
    loop {
        let x = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        if x > 0.0 {
            return x;
        }
    }
}

/// Uniform integer in `0..bound` by rejection; avoids any dependence on the
/// sampling algorithms inside `rand`, which are not frozen across versions.
pub(crate) fn below<R: rand::RngCore>(rng: &mut R, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
    loop {
        let x = rng.next_u64();
        if x <= zone {
            return x % bound;
        }
    }
}
