//! Reproducible random-number contract.
//!
//! A single 64-bit seed owns a family of independent ChaCha12 streams.
//! Every parallel task derives its own stream from (seed, stream id), so
//! Monte-Carlo results are bit-identical across runs regardless of worker
//! count or scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Master seed for all randomized operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// Independent stream `stream_id` of this seed's family.
    pub fn stream(self, stream_id: u64) -> ChaCha12Rng {
        let mut state = self.0;
        let mut key = [0u8; 32];
        for chunk in key.chunks_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha12Rng::from_seed(key);
        rng.set_stream(stream_id);
        rng
    }

    /// Stream 0, for single-stream consumers.
    pub fn rng(self) -> ChaCha12Rng {
        self.stream(0)
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
