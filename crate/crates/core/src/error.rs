use thiserror::Error;

/// Everything that can go wrong while building detector tables, propagating
/// states, or calibrating an operating point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter is outside its physical domain.
    #[error("{name} = {value} must be {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    /// Two objects that must agree on photon-number or outcome range do not.
    #[error("dimension mismatch: needed {needed}, have {have}")]
    Dimension { needed: usize, have: usize },

    /// A vector that must be a probability distribution does not sum to 1.
    #[error("probabilities sum to {sum}, expected 1 within {tol}")]
    NotNormalized { sum: f64, tol: f64 },

    /// The SNR never crosses the calibration target on the search bracket.
    #[error(
        "SNR target {target} not bracketed on [{lo}, {hi}]: snr(lo) = {snr_lo}, snr(hi) = {snr_hi}"
    )]
    NotBracketed {
        target: f64,
        lo: f64,
        hi: f64,
        snr_lo: f64,
        snr_hi: f64,
    },

    /// The SNR failed a monotonicity sanity check, so bisection is unsound.
    #[error("SNR not monotone near nbar = {nbar}: snr = {snr} escapes [{snr_hi}, {snr_lo}]")]
    NonMonotone {
        nbar: f64,
        snr: f64,
        snr_lo: f64,
        snr_hi: f64,
    },

    /// An internal self-check failed; results cannot be trusted.
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
