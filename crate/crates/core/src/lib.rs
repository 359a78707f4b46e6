//! Simulation laboratory for finite-precision hidden-variable qubit physics
//! and the fractal dynamical systems that motivate it.
//!
//! The crate is organised around six concerns:
//!
//! - [`numkit`] — exact dyadic-rational arithmetic with bit budgets, rational
//!   angles, and the rational-cosine classification that drives every
//!   definability verdict.
//! - [`bitstring`] — length-`2^N` bit strings as hidden-variable sample
//!   spaces, the quaternionic generator operators, and the two-parameter
//!   negation/permutation family.
//! - [`hilbert`] — the correspondence between bit-string operators and
//!   single-qubit state descriptors, including rejection of states that no
//!   bit budget can represent.
//! - [`chsh`] — the CHSH experiment harness: definability analysis,
//!   disjoint sub-ensembles, exact correlations and S statistics, and the
//!   measurement-independence metric.
//! - [`dynsys`] — attracting invariant sets, Cantor constructions with exact
//!   measure accounting, fractal dimension estimators, and delay-coordinate
//!   reconstruction.
//!
//! Floating-point machinery in [`dynsys`] is generic over the scalar type via
//! `num-traits`; everything that feeds a definability verdict is exact.

pub mod bitstring;
pub mod chsh;
pub mod dynsys;
pub mod hilbert;
pub mod numkit;

pub use numkit::{BitBudget, Dyadic, RationalAngle};

/// Double-precision trajectory, the scalar type the CLI works in.
pub type Trajectory64 = dynsys::Trajectory<f64>;
/// Double-precision point set.
pub type PointSet64 = dynsys::PointSet<f64>;
/// Double-precision dimension-fit report.
pub type DimensionFit64 = dynsys::DimensionFit<f64>;
