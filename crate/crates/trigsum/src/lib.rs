//! Convergence acceleration for trigonometric series.
//!
//! Series of the form `Σ aₙ cos((αn + β)x)` or `Σ aₙ sin((αn + β)x)` often
//! converge too slowly for direct summation to be practical: the partial sums
//! inherit the decay rate of the coefficients `aₙ`. This crate rewrites such a
//! series as a short list of closed-form *head terms* plus a remainder series
//! whose coefficients are repeated differences `L(aₙ)` of the original ones.
//! When the scale factors `r₁, …, r_p` driving those differences are chosen
//! close to the limiting ratios of the coefficient sequence, `L(aₙ)` decays
//! much faster than `aₙ` and the remainder can be summed in a handful of
//! terms.
//!
//! The pieces:
//!
//! * [`operators`] — the difference operator itself (recurrence and symmetric
//!   closed form), its elementary symmetric weights, and its action on the
//!   trigonometric factors.
//! * [`transforms`] — the rewriting of a series into head terms plus an
//!   accelerated remainder, exact up to rounding for any admissible scale
//!   factors.
//! * [`acceleration`] — data-driven estimation of good scale factors from the
//!   coefficients alone, hypothesis checks for the infinite-expansion variant,
//!   and the Euler-style partial sums built from head terms only.
//! * [`evaluation`] — brute-force reference sums, terms-to-tolerance counts,
//!   and the report type the CLI serializes.
//! * [`cli`] — argument parsing and output formatting for the `trigsum`
//!   binary.

pub mod acceleration;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod operators;
pub mod sequence;
pub mod transforms;

mod extended;
mod kahan;

pub use error::{Error, Result};

/// Scalar type used throughout: complex double precision.
///
/// Real-valued inputs stay on the real line through every formula, but scale
/// factors and coefficients are allowed to be complex, so the library computes
/// in ℂ and lets callers project back when the imaginary part is negligible.
pub type Scalar = num_complex::Complex64;
