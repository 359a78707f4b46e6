//! Delay-coordinate reconstruction from a single scalar observable.

use num_traits::{Float, FromPrimitive};

use super::dimension::PointSet;
use super::DynSysError;

/// Delay-embedding parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingSpec {
    pub delay: usize,
    pub dimension: usize,
}

impl EmbeddingSpec {
    pub fn new(delay: usize, dimension: usize) -> Result<Self, DynSysError> {
        if delay == 0 || dimension < 2 {
            return Err(DynSysError::BadEmbeddingSpec);
        }
        Ok(EmbeddingSpec { delay, dimension })
    }
}

/// Embeds a scalar series as the points
/// `(s_t, s_(t-tau), ..., s_(t-(m-1)tau))` for every admissible `t`.
pub fn takens_embed<F: Float>(
    series: &[F],
    spec: &EmbeddingSpec,
) -> Result<PointSet<F>, DynSysError> {
    let span = spec.delay * (spec.dimension - 1);
    if span >= series.len() {
        return Err(DynSysError::SeriesTooShort);
    }
    let mut data = Vec::with_capacity((series.len() - span) * spec.dimension);
    for t in span..series.len() {
        for j in 0..spec.dimension {
            data.push(series[t - j * spec.delay]);
        }
    }
    PointSet::from_flat(spec.dimension, data)
}

/// Normalized autocorrelation function up to `max_lag` (inclusive).
pub fn autocorrelation<F: Float + FromPrimitive>(series: &[F], max_lag: usize) -> Vec<F> {
    let n = series.len();
    let nf = F::from_usize(n).unwrap();
    let mean = series.iter().fold(F::zero(), |a, &v| a + v) / nf;
    let var = series.iter().fold(F::zero(), |a, &v| a + (v - mean) * (v - mean));
    let mut acf = Vec::with_capacity(max_lag + 1);
    for lag in 0..=max_lag.min(n.saturating_sub(1)) {
        let mut c = F::zero();
        for t in lag..n {
            c = c + (series[t] - mean) * (series[t - lag] - mean);
        }
        acf.push(if var > F::zero() { c / var } else { F::zero() });
    }
    acf
}

/// Lag of the first local minimum of the autocorrelation function, the
/// standard delay choice for reconstruction.
pub fn first_autocorr_minimum<F: Float + FromPrimitive>(
    series: &[F],
    max_lag: usize,
) -> Option<usize> {
    let acf = autocorrelation(series, max_lag);
    for lag in 1..acf.len().saturating_sub(1) {
        if acf[lag] < acf[lag - 1] && acf[lag] <= acf[lag + 1] {
            return Some(lag);
        }
    }
    None
}
