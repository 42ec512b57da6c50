//! Counter-addressed uniform streams.
//!
//! Every draw is addressed by `(seed, rep, unit, purpose, index)`. The
//! address maps onto a ChaCha8 keystream: the seed keys the cipher, the
//! replicate selects the 64-bit stream id, and `(purpose, unit, index)`
//! select the word offset inside that stream. A draw therefore never
//! depends on which other draws were made, or in what order, so replicates
//! can run on any number of threads with bit-identical results.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Units (e.g. simulated papers) per replicate.
pub const MAX_UNITS: u64 = 1 << 26;
/// Draws per `(rep, unit, purpose)`.
pub const MAX_DRAWS: u64 = 1 << 39;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Purpose {
    Study = 0,
    Question = 1,
    SeAssignment = 2,
    Sign = 3,
}

pub struct DrawStream {
    rng: ChaCha8Rng,
}

impl DrawStream {
    pub fn new(seed: u64, rep: u64, unit: u64, purpose: Purpose) -> Self {
        debug_assert!(unit < MAX_UNITS);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(rep);
        // 68-bit word offset: 2 bits purpose | 26 bits unit | 40 bits words.
        rng.set_word_pos((u128::from(purpose as u8) << 66) | (u128::from(unit) << 40));
        DrawStream { rng }
    }

    /// Uniform on the open interval (0, 1): 53 random bits, centred in
    /// their cell, so neither 0 nor 1 can occur.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * SCALE
    }
}
