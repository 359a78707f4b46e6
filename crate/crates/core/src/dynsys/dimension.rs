//! Fractal dimension estimators: box counting and pairwise-correlation
//! scaling, both reported with their fit diagnostics. Finite-sample
//! estimators are biased, so consumers should read the residuals and keep
//! tolerances wide.

use std::collections::HashSet;

use num_traits::{Float, FromPrimitive};

use super::DynSysError;

/// A flat row-major point set.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<F> {
    dim: usize,
    data: Vec<F>,
}

impl<F: Float> PointSet<F> {
    pub fn from_flat(dim: usize, data: Vec<F>) -> Result<Self, DynSysError> {
        if dim == 0 || data.len() % dim != 0 {
            return Err(DynSysError::RaggedPoints);
        }
        Ok(PointSet { dim, data })
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self, DynSysError> {
        let dim = rows.first().map(|r| r.len()).unwrap_or(0);
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(DynSysError::RaggedPoints);
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            data.extend_from_slice(r);
        }
        Ok(PointSet { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[F] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Keeps every `stride`-th point, a cheap decimation for the quadratic
    /// estimators.
    pub fn thin(&self, stride: usize) -> PointSet<F> {
        let stride = stride.max(1);
        let mut data = Vec::new();
        let mut i = 0;
        while i < self.len() {
            data.extend_from_slice(self.point(i));
            i += stride;
        }
        PointSet { dim: self.dim, data }
    }
}

/// A log-log line fit with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionFit<F> {
    /// The dimension estimate: the fitted slope.
    pub estimate: F,
    pub intercept: F,
    pub r_squared: F,
    pub max_abs_residual: F,
    /// The (scale, count) or (radius, correlation-sum) samples that entered
    /// the fit, in fit order.
    pub samples: Vec<(F, F)>,
    /// Indices into `samples` actually fitted (scaling window).
    pub window: (usize, usize),
}

fn linear_fit<F: Float + FromPrimitive>(xs: &[F], ys: &[F]) -> (F, F, F, F) {
    let n = F::from_usize(xs.len()).unwrap();
    let sx = xs.iter().fold(F::zero(), |a, &v| a + v);
    let sy = ys.iter().fold(F::zero(), |a, &v| a + v);
    let sxx = xs.iter().fold(F::zero(), |a, &v| a + v * v);
    let sxy = xs.iter().zip(ys).fold(F::zero(), |a, (&x, &y)| a + x * y);
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;

    let mean_y = sy / n;
    let mut ss_res = F::zero();
    let mut ss_tot = F::zero();
    let mut max_resid = F::zero();
    for (&x, &y) in xs.iter().zip(ys) {
        let r = y - (slope * x + intercept);
        ss_res = ss_res + r * r;
        ss_tot = ss_tot + (y - mean_y) * (y - mean_y);
        if r.abs() > max_resid {
            max_resid = r.abs();
        }
    }
    let r2 = if ss_tot > F::zero() { F::one() - ss_res / ss_tot } else { F::one() };
    (slope, intercept, r2, max_resid)
}

/// Box-counting dimension: the least-squares slope of `log N(eps)` against
/// `log(1/eps)` over the supplied scales, with residual diagnostics.
pub fn box_counting_dimension<F: Float + FromPrimitive>(
    points: &PointSet<F>,
    scales: &[F],
) -> Result<DimensionFit<F>, DynSysError> {
    if scales.len() < 3 {
        return Err(DynSysError::TooFewScales(3));
    }
    if points.is_empty() {
        return Err(DynSysError::DegeneratePointSet);
    }
    let mut samples = Vec::with_capacity(scales.len());
    let mut xs = Vec::with_capacity(scales.len());
    let mut ys = Vec::with_capacity(scales.len());
    for &eps in scales {
        if eps <= F::zero() {
            return Err(DynSysError::TooFewScales(3));
        }
        let mut boxes: HashSet<Vec<i64>> = HashSet::new();
        for i in 0..points.len() {
            let key: Vec<i64> = points
                .point(i)
                .iter()
                .map(|&c| (c / eps).floor().to_i64().unwrap_or(i64::MAX))
                .collect();
            boxes.insert(key);
        }
        let count = F::from_usize(boxes.len()).unwrap();
        samples.push((eps, count));
        xs.push((F::one() / eps).ln());
        ys.push(count.ln());
    }
    let (slope, intercept, r2, max_resid) = linear_fit(&xs, &ys);
    Ok(DimensionFit {
        estimate: slope,
        intercept,
        r_squared: r2,
        max_abs_residual: max_resid,
        window: (0, samples.len()),
        samples,
    })
}

/// Correlation dimension: the slope of `log C(r)` against `log r` over a
/// scaling region chosen as the best-fitting contiguous window of radii.
pub fn correlation_dimension<F: Float + FromPrimitive>(
    points: &PointSet<F>,
    radii: &[F],
) -> Result<DimensionFit<F>, DynSysError> {
    if radii.len() < 3 {
        return Err(DynSysError::TooFewScales(3));
    }
    let m = points.len();
    if m < 2 {
        return Err(DynSysError::DegeneratePointSet);
    }

    let mut sorted: Vec<F> = radii.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if sorted[0] <= F::zero() {
        return Err(DynSysError::TooFewScales(3));
    }

    // Cumulative pair counts per radius via one pass over all pairs.
    let mut counts = vec![0u64; sorted.len()];
    let mut any_distinct = false;
    for i in 0..m {
        let pi = points.point(i);
        for j in (i + 1)..m {
            let pj = points.point(j);
            let mut d2 = F::zero();
            for k in 0..points.dim() {
                let diff = pi[k] - pj[k];
                d2 = d2 + diff * diff;
            }
            let d = d2.sqrt();
            if d > F::zero() {
                any_distinct = true;
            }
            // First radius index covering this distance.
            let idx = sorted.partition_point(|&r| r < d);
            if idx < counts.len() {
                counts[idx] += 1;
            }
        }
    }
    if !any_distinct {
        return Err(DynSysError::DegeneratePointSet);
    }
    let mut cumulative = 0u64;
    let pairs = (m as u64) * (m as u64 - 1) / 2;
    let mut samples = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (idx, &r) in sorted.iter().enumerate() {
        cumulative += counts[idx];
        if cumulative == 0 {
            continue; // below resolution; no information
        }
        let c = F::from_u64(cumulative).unwrap() / F::from_u64(pairs).unwrap();
        samples.push((r, c));
        xs.push(r.ln());
        ys.push(c.ln());
    }
    if xs.len() < 3 {
        return Err(DynSysError::TooFewScales(3));
    }

    // Scaling region: contiguous window (at least 4 points or half the
    // usable radii) maximising R^2, longer windows breaking ties.
    let min_len = 4.min(xs.len()).max(xs.len() / 2);
    let mut best: Option<(F, usize, usize)> = None;
    for start in 0..xs.len() {
        for end in (start + min_len)..=xs.len() {
            let (_, _, r2, _) = linear_fit(&xs[start..end], &ys[start..end]);
            let better = match best {
                None => true,
                Some((best_r2, bs, be)) => {
                    r2 > best_r2 || (r2 == best_r2 && end - start > be - bs)
                }
            };
            if better {
                best = Some((r2, start, end));
            }
        }
    }
    let (_, start, end) = best.unwrap();
    let (slope, intercept, r2, max_resid) = linear_fit(&xs[start..end], &ys[start..end]);
    Ok(DimensionFit {
        estimate: slope,
        intercept,
        r_squared: r2,
        max_abs_residual: max_resid,
        samples,
        window: (start, end),
    })
}
