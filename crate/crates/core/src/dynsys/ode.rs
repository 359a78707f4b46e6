//! Attracting-set example systems and a fixed-step fourth-order
//! Runge-Kutta integrator, generic over the float scalar.

use num_traits::{Float, FromPrimitive};

use super::dimension::PointSet;
use super::DynSysError;

/// The two example systems.
///
/// `LimitCycle` is the planar flow with radial dynamics `r' = r(1 - r^2)`
/// and unit angular speed, written in Cartesian coordinates to avoid the
/// polar singularity at the origin; its attracting invariant set is the unit
/// circle. `Lorenz` is the classic three-dimensional flow, fractal for the
/// chaotic parameter ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeSystem<F> {
    LimitCycle,
    Lorenz { sigma: F, r: F, b: F },
}

impl<F: Float + FromPrimitive> OdeSystem<F> {
    /// Lorenz system with the canonical chaotic parameters (10, 28, 8/3).
    pub fn lorenz_standard() -> Self {
        OdeSystem::Lorenz {
            sigma: F::from_f64(10.0).unwrap(),
            r: F::from_f64(28.0).unwrap(),
            b: F::from_f64(8.0 / 3.0).unwrap(),
        }
    }

    pub fn lorenz(sigma: F, r: F, b: F) -> Result<Self, DynSysError> {
        if sigma <= F::zero() || r <= F::zero() || b <= F::zero() {
            return Err(DynSysError::BadParameters);
        }
        Ok(OdeSystem::Lorenz { sigma, r, b })
    }

    pub fn dim(&self) -> usize {
        match self {
            OdeSystem::LimitCycle => 2,
            OdeSystem::Lorenz { .. } => 3,
        }
    }

    /// The vector field at `state`.
    pub fn field(&self, state: &[F]) -> Vec<F> {
        match self {
            OdeSystem::LimitCycle => {
                let (x, y) = (state[0], state[1]);
                let shrink = F::one() - (x * x + y * y);
                vec![x * shrink - y, y * shrink + x]
            }
            OdeSystem::Lorenz { sigma, r, b } => {
                let (x, y, z) = (state[0], state[1], state[2]);
                vec![*sigma * (y - x), x * (*r - z) - y, x * y - *b * z]
            }
        }
    }
}

/// A fixed-step trajectory: uniform times with flat row-major states.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<F> {
    step: F,
    dim: usize,
    times: Vec<F>,
    data: Vec<F>,
}

impl<F: Float> Trajectory<F> {
    pub fn step(&self) -> F {
        self.step
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored states, including the initial one.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn time(&self, i: usize) -> F {
        self.times[i]
    }

    pub fn state(&self, i: usize) -> &[F] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn times(&self) -> &[F] {
        &self.times
    }

    /// One scalar component as a time series.
    pub fn component(&self, j: usize) -> Vec<F> {
        (0..self.len()).map(|i| self.state(i)[j]).collect()
    }

    /// Collects states into a point set, skipping the first `skip` states
    /// (transient discard) and keeping every `stride`-th one after that.
    pub fn points(&self, skip: usize, stride: usize) -> PointSet<F> {
        let stride = stride.max(1);
        let mut data = Vec::new();
        let mut i = skip;
        while i < self.len() {
            data.extend_from_slice(self.state(i));
            i += stride;
        }
        PointSet::from_flat(self.dim, data).expect("flat data is well-formed")
    }
}

/// One classical fourth-order Runge-Kutta step.
pub fn rk4_step<F: Float + FromPrimitive>(
    sys: &OdeSystem<F>,
    state: &[F],
    h: F,
) -> Vec<F> {
    let half = F::from_f64(0.5).unwrap();
    let sixth = F::one() / F::from_f64(6.0).unwrap();
    let two = F::from_f64(2.0).unwrap();

    let add_scaled = |a: &[F], k: &[F], c: F| -> Vec<F> {
        a.iter().zip(k).map(|(&ai, &ki)| ai + ki * c).collect()
    };

    let k1 = sys.field(state);
    let k2 = sys.field(&add_scaled(state, &k1, half * h));
    let k3 = sys.field(&add_scaled(state, &k2, half * h));
    let k4 = sys.field(&add_scaled(state, &k3, h));

    (0..state.len())
        .map(|i| state[i] + (k1[i] + two * k2[i] + two * k3[i] + k4[i]) * h * sixth)
        .collect()
}

/// Integrates with fixed-step RK4 over `round(horizon/step)` steps,
/// deterministic in its inputs. Non-finite states abort with a divergence
/// error.
pub fn integrate<F: Float + FromPrimitive>(
    sys: &OdeSystem<F>,
    x0: &[F],
    step: F,
    horizon: F,
) -> Result<Trajectory<F>, DynSysError> {
    if x0.len() != sys.dim() {
        return Err(DynSysError::DimensionMismatch { got: x0.len(), want: sys.dim() });
    }
    if step <= F::zero() || horizon <= F::zero() || !step.is_finite() || !horizon.is_finite() {
        return Err(DynSysError::BadStep);
    }
    if let OdeSystem::Lorenz { sigma, r, b } = sys {
        if *sigma <= F::zero() || *r <= F::zero() || *b <= F::zero() {
            return Err(DynSysError::BadParameters);
        }
    }
    let n_steps = (horizon / step).round().to_usize().ok_or(DynSysError::BadStep)?.max(1);

    let dim = sys.dim();
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut data = Vec::with_capacity((n_steps + 1) * dim);
    let mut state = x0.to_vec();
    times.push(F::zero());
    data.extend_from_slice(&state);

    for k in 1..=n_steps {
        state = rk4_step(sys, &state, step);
        if state.iter().any(|v| !v.is_finite()) {
            let t = step.to_f64().unwrap_or(f64::NAN) * k as f64;
            return Err(DynSysError::Diverged(t));
        }
        times.push(step * F::from_usize(k).unwrap());
        data.extend_from_slice(&state);
    }

    Ok(Trajectory { step, dim, times, data })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn radius(state: &[f64]) -> f64 {
        (state[0] * state[0] + state[1] * state[1]).sqrt()
    }

    #[test]
    fn lorenz_field_example() {
        let sys = OdeSystem::lorenz_standard();
        let d = sys.field(&[1.0, 1.0, 1.0]);
        assert_eq!(d[0], 0.0);
        assert_eq!(d[1], 26.0);
        assert!((d[2] - (1.0 - 8.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn limit_cycle_attracts() {
        let sys = OdeSystem::LimitCycle;
        for r0 in [0.1, 2.0] {
            let traj = integrate(&sys, &[r0, 0.0], 0.01, 100.0).unwrap();
            let end = traj.state(traj.len() - 1);
            assert!(
                (radius(end) - 1.0).abs() < 1e-6,
                "r0={r0} ended at radius {}",
                radius(end)
            );
        }
    }

    #[test]
    fn unit_circle_is_invariant() {
        let sys = OdeSystem::LimitCycle;
        let traj = integrate(&sys, &[1.0, 0.0], 0.01, 10.0).unwrap();
        for i in 0..traj.len() {
            assert!((radius(traj.state(i)) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn row_count_contract() {
        let traj = integrate(&OdeSystem::<f64>::LimitCycle, &[0.5, 0.0], 0.01, 1.0).unwrap();
        // round(horizon/step) steps plus the initial state.
        assert_eq!(traj.len(), 101);
        assert!((traj.time(100) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let sys = OdeSystem::<f64>::LimitCycle;
        assert!(matches!(
            integrate(&sys, &[1.0], 0.01, 1.0),
            Err(DynSysError::DimensionMismatch { .. })
        ));
        assert!(matches!(integrate(&sys, &[1.0, 0.0], -0.01, 1.0), Err(DynSysError::BadStep)));
        assert!(matches!(
            integrate(&OdeSystem::Lorenz { sigma: -1.0, r: 28.0, b: 2.0 }, &[1.0, 1.0, 1.0], 0.01, 1.0),
            Err(DynSysError::BadParameters)
        ));
        assert!(OdeSystem::lorenz(10.0, 28.0, 0.0).is_err());
        // A wildly non-physical start diverges under a large step.
        let blown = integrate(&OdeSystem::lorenz_standard(), &[1e160, 1e160, 1e160], 0.1, 1.0);
        assert!(matches!(blown, Err(DynSysError::Diverged(_))));
    }

    #[test]
    fn works_in_single_precision() {
        let sys = OdeSystem::<f32>::LimitCycle;
        let traj = integrate(&sys, &[0.1f32, 0.0], 0.01, 50.0).unwrap();
        let end = traj.state(traj.len() - 1);
        let r = (end[0] * end[0] + end[1] * end[1]).sqrt();
        assert!((r - 1.0).abs() < 1e-3);
    }
}
