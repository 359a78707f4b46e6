//! Exact dyadic-rational arithmetic with bit budgets, rational multiples of
//! pi, and the number-theoretic gate (rational angles with rational cosine)
//! behind every definability verdict.
//!
//! Nothing in this module ever rounds: [`Dyadic`] values are exact, and the
//! high-precision machinery in [`highprec`] works on scaled big integers at a
//! fixed 240 fractional bits.

mod angle;
mod dyadic;
pub mod highprec;

pub use angle::{doubling_sequence, niven_classify, DoublingSequence, NivenClass, RationalAngle};
pub use dyadic::{closure_counterexample, fits_budget, BitBudget, Dyadic};

use thiserror::Error;

/// Errors raised by exact-arithmetic constructors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    /// Bit budgets must satisfy `2 <= N <= 62`.
    #[error("bit budget N={0} out of range (need 2 <= N <= {max})", max = BitBudget::MAX_BITS)]
    InvalidBudget(u32),
    /// Rational denominators must be nonzero.
    #[error("zero denominator in rational value")]
    ZeroDenominator,
    /// Exact arithmetic exceeded the 128-bit mantissa range.
    #[error("dyadic arithmetic overflowed the 128-bit mantissa range")]
    Overflow,
}
