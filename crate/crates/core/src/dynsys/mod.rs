//! Fractal invariant-set toolkit: attracting-set examples, Cantor
//! constructions with exact measure accounting, fractal dimension
//! estimators, and delay-coordinate reconstruction.
//!
//! Floating-point machinery here is generic over the scalar via
//! `num-traits`; the Cantor constructions are exact rationals throughout.

mod cantor;
mod dimension;
mod embed;
mod ode;

pub use cantor::{
    cantor_intervals, cantor_membership, dyadic_integer_map, on_set_perturbations,
    perfect_set_neighbor, perturb_off_set, perturb_on_set, ternary_to_binary_map, CantorIterate,
    CantorSpec, DigitStream, Neighbor, OffSetProbe,
};
pub use dimension::{box_counting_dimension, correlation_dimension, DimensionFit, PointSet};
pub use embed::{autocorrelation, first_autocorr_minimum, takens_embed, EmbeddingSpec};
pub use ode::{integrate, rk4_step, OdeSystem, Trajectory};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynSysError {
    #[error("state dimension {got} does not match system dimension {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("integration step and horizon must be positive and finite")]
    BadStep,
    #[error("Lorenz parameters must be strictly positive")]
    BadParameters,
    #[error("trajectory diverged to a non-finite state at t = {0}")]
    Diverged(f64),
    #[error("Cantor spec invalid: {0}")]
    BadCantorSpec(String),
    #[error("iterate would materialise {0} intervals, over the guard limit")]
    TooManyIntervals(u128),
    #[error("point {0} outside [0, 1]")]
    PointOutOfRange(String),
    #[error("digit {digit} invalid at base {base} (or not in the expected digit set)")]
    BadDigit { digit: u8, base: u32 },
    #[error("digit stream too long for exact 128-bit arithmetic")]
    DigitsTooLong,
    #[error("digit index {index} not below the spec depth {depth}")]
    DigitIndexOutOfRange { index: usize, depth: u32 },
    #[error("epsilon must be positive")]
    BadEpsilon,
    #[error(
        "a guaranteed neighbor at distance < epsilon needs depth {required}, spec has {available}"
    )]
    DepthTooShallow { required: u32, available: u32 },
    #[error("neighbors cannot approach this point: its expansion leaves the allowed digits")]
    EpsilonUnreachable,
    #[error("perfect-set operations need at least two allowed digits")]
    NeedTwoDigits,
    #[error("need at least {0} scales/radii with nonzero counts")]
    TooFewScales(usize),
    #[error("time series too short: need delay*(dimension-1) < length")]
    SeriesTooShort,
    #[error("embedding spec invalid: delay >= 1 and dimension >= 2 required")]
    BadEmbeddingSpec,
    #[error("degenerate point set: all points identical")]
    DegeneratePointSet,
    #[error("point set rows have inconsistent dimensions")]
    RaggedPoints,
}
