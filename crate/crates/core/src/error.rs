//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors produced by numeric routines, distribution matchers and the
/// channel/control layers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside a function's domain (e.g. `x <= 0` for `ln_gamma`).
    #[error("domain error in {context}: {message}")]
    Domain { context: &'static str, message: String },

    /// Adaptive quadrature ran out of subdivisions. Carries the best
    /// estimate reached and the error bound attached to it.
    #[error("quadrature did not converge: estimate {estimate}, error bound {error_bound}")]
    QuadratureNonConvergence { estimate: f64, error_bound: f64 },

    /// Root bracket does not satisfy `f(lo) <= 0 <= f(hi)`.
    #[error("root bracket violation on [{lo}, {hi}]: f(lo)={f_lo}, f(hi)={f_hi}")]
    BracketViolation { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// Bit input of the wrong length for a distribution matcher.
    #[error("expected {expected} input bits, got {got}")]
    WrongBitLength { expected: usize, got: usize },

    /// Sequence handed to a decoder is not a codeword of the matcher
    /// (wrong length, amplitude outside the alphabet, energy above the
    /// bound, or wrong composition).
    #[error("invalid codeword: {0}")]
    InvalidCodeword(String),

    /// Sequence is a valid trellis path but its index falls outside the
    /// used range `[0, 2^k)`. Distinct from [`Error::InvalidCodeword`].
    #[error("codeword index {index} outside used range [0, 2^{k_bits})")]
    IndexOutOfRange { index: String, k_bits: usize },

    /// Scheme parameters violate the PCS rate bounds.
    #[error("invalid PCS scheme: {0}")]
    InvalidScheme(String),

    /// Requested rate is not achievable by the scheme at any SNR.
    #[error("target rate {target} bits/4D unreachable (max achievable ≈ {max_achievable})")]
    TargetUnreachable { target: f64, max_achievable: f64 },

    /// Mismatched stream lengths handed to the symbol mapper.
    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    /// Catch-all for invalid arguments to library entry points.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn domain(context: &'static str, message: impl Into<String>) -> Self {
        Error::Domain { context, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
