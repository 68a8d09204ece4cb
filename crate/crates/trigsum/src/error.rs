//! Error type shared across the crate.

use thiserror::Error;

use crate::Scalar;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor or command argument failed validation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A bounded coefficient sequence was asked for an index past its end.
    #[error("coefficient index {index} out of range: sequence provides {len} values")]
    IndexOutOfRange { index: u64, len: u64 },

    /// `1 - 2 r cos(αx) + r²` came out too close to zero for scale factor
    /// `index` (1-based); the transform divides by it, so this `r` is
    /// inadmissible at this `αx`.
    #[error(
        "denominator {index} is within {threshold:e} of zero (|1 - 2 r cos(αx) + r²| = {magnitude:e})"
    )]
    DenominatorNearZero {
        index: usize,
        magnitude: f64,
        threshold: f64,
    },

    /// Successive-ratio probes never settled; the coefficient sequence may
    /// not have a limiting ratio at this difference depth.
    #[error("ratio probes did not stabilize; the coefficient ratio may not converge")]
    RatioDivergent { last_estimate: Option<Scalar> },

    /// The differenced coefficients vanish at every probe index, so there is
    /// no ratio to estimate: the operator already annihilates the sequence.
    #[error("differenced coefficients vanish at the probe indices; nothing left to estimate")]
    ZeroDenominator,

    /// An iteration count hit its safety cap before the stopping rule fired.
    #[error("term budget of {budget} exceeded before the stopping criterion was met")]
    BudgetExceeded { budget: u64 },
}
