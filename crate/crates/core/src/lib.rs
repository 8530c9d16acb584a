//! Adaptive probabilistic constellation shaping for free-space optical
//! links.
//!
//! The crate provides:
//! - exact enumerative sphere shaping and constant-composition
//!   distribution matchers ([`dm`]),
//! - the sign-amplitude PCS-M-QAM modem with Monte-Carlo GMI estimation
//!   ([`modem`]),
//! - the statistical FSO channel (Gamma-Gamma turbulence, pointing
//!   errors, deterministic loss) with quadrature and sampling routes
//!   ([`channel`]),
//! - the adaptive-rate controller: rate/SNR lookup tables, outage
//!   probability and ergodic capacity ([`control`]),
//! - and the supporting numerics ([`numerics`]).

pub mod channel;
pub mod control;
pub mod dm;
pub mod error;
pub mod modem;
pub mod numerics;

pub use error::{Error, Result};
