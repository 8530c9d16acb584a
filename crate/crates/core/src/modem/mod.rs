//! Sign-amplitude PCS-M-QAM modem: constellation construction, symbol
//! mapping, the AWGN measurement channel, and GMI estimation with the
//! finite-length rate-loss correction.

pub mod gmi;
pub mod scheme;

pub use gmi::{
    awgn_apply, estimate_gmi, estimate_gmi_with_blocks, snr_threshold, GmiEstimate, McSpec,
    GMI_SWEEP_CSV_HEADER,
};
pub use scheme::{map_symbols, AskPoint, PcsScheme};
