//! Amplitude alphabets for sign-amplitude shaping.

use crate::error::{Error, Result};

/// Ordered set of odd positive amplitudes, e.g. {1,3} or {1,3,5,7}.
///
/// Squared odd amplitudes are congruent to 1 mod 8, so energy differences
/// between alphabet symbols are always multiples of 8; the trellis level
/// arithmetic in [`crate::dm::ess`] relies on this.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmplitudeAlphabet {
    amps: Vec<u32>,
}

impl AmplitudeAlphabet {
    pub fn new(amps: Vec<u32>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidInput("alphabet must be nonempty".into()));
        }
        for w in amps.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidInput(format!(
                    "alphabet must be strictly increasing, got {amps:?}"
                )));
            }
        }
        if let Some(a) = amps.iter().find(|a| **a % 2 == 0) {
            return Err(Error::InvalidInput(format!("alphabet must be all odd, got {a}")));
        }
        Ok(AmplitudeAlphabet { amps })
    }

    /// {1, 3}
    pub fn two_level() -> Self {
        AmplitudeAlphabet { amps: vec![1, 3] }
    }

    /// {1, 3, 5, 7} — the per-dimension amplitudes of 64QAM.
    pub fn four_level() -> Self {
        AmplitudeAlphabet { amps: vec![1, 3, 5, 7] }
    }

    pub fn amplitudes(&self) -> &[u32] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Trellis level step of each amplitude: (a² - 1) / 8.
    pub fn level_weights(&self) -> Vec<usize> {
        self.amps.iter().map(|&a| ((a as usize) * (a as usize) - 1) / 8).collect()
    }

    /// Position of `amp` in the alphabet, if present.
    pub fn index_of(&self, amp: u32) -> Option<usize> {
        self.amps.iter().position(|&a| a == amp)
    }
}
