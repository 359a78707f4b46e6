//! The CHSH experiment harness.
//!
//! Four instrument orientations are analysed two ways. The joint analysis
//! asks which of the four correlations a *single* hidden-variable ensemble
//! could carry: the re-preparation cosines and the chosen pair are dyadic by
//! construction, and the spherical cosine rule plus the rational-cosine
//! theorem push the one-sided counterfactual pairs off the representable
//! set, leaving exactly two definable correlations. The experimental
//! protocol instead runs four sub-experiments on four disjoint ensembles,
//! all definable, whose exact correlations sum past the classical bound.

mod baseline;
mod config;
mod experiment;
mod triangle;

pub use baseline::{all_deterministic_strategies, local_hv_baseline, DeterministicStrategy};
pub use config::{
    snap_to_dyadic, AngleDescriptor, ChshConfig, DefinabilityAnalysis, NonDyadicReason,
    PairVerdict, SettingPair, SnapRecord,
};
pub use experiment::{
    build_subexperiment, chsh_statistic, corr, mi_violation, run_exact_experiment,
    run_planar_experiment, ChshReport, CorrelationSet, LambdaDistribution, LambdaId,
    SubExperiment,
};
pub use triangle::{triangle_third_cosine, ThirdCosine};

use num_rational::Ratio;
use thiserror::Error;

use crate::bitstring::BitStringError;
use crate::numkit::{Dyadic, NumError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChshError {
    #[error("cosine {0} outside [-1, 1]")]
    CosineOutOfRange(Dyadic),
    #[error("degenerate spherical triangle: side cosine {0} has magnitude 1")]
    DegenerateTriangle(Dyadic),
    #[error("apex angle {0} (as a fraction of pi) outside (0, 1/2]")]
    ApexOutOfRange(String),
    #[error("re-preparation cosine for {0} must be exactly dyadic within budget")]
    NonDyadicSetting(String),
    #[error("sub-experiments must carry pairwise distinct ensemble labels")]
    DuplicateEnsembles,
    #[error("sub-experiment for {expected} was given one for {got}")]
    PairMismatch { expected: SettingPair, got: SettingPair },
    #[error("sub-experiment budgets disagree")]
    MixedBudgets,
    #[error("strategy mixture weights must be non-negative and sum to 1 (got {0})")]
    NotNormalized(Ratio<i128>),
    #[error("measurement-independence metric needs at least two setting-pair ensembles")]
    TooFewEnsembles,
    #[error("snap target must lie in [-1, 1], got {0}")]
    SnapOutOfRange(f64),
    #[error("snapping beyond 52 fractional bits exceeds double precision")]
    SnapTooFine,
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    BitString(#[from] BitStringError),
}

pub(crate) fn serialize_ratio<S: serde::Serializer>(
    r: &Ratio<i128>,
    ser: S,
) -> Result<S::Ok, S::Error> {
    ser.collect_str(r)
}
