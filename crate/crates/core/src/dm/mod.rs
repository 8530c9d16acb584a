//! Distribution matchers: enumerative sphere shaping and the
//! constant-composition baseline, plus the Maxwell-Boltzmann machinery
//! both compare against.

pub mod alphabet;
pub mod ccdm;
pub mod ess;
pub mod mb;

pub use alphabet::AmplitudeAlphabet;
pub use ccdm::{
    ccdm_decode, ccdm_encode, ccdm_rate_sweep, quantize_composition, CcdmCodebook, CcdmSweepRow,
    Composition,
};
pub use ess::{analyze, build_trellis, ess_decode, ess_encode, rate_sweep, DmCodebook, RateSweepRow, ShapingTrellis};
pub use mb::{entropy_bits, fit_lambda, mb_distribution, mb_entropy_for_energy};
