//! Continuous-time diffusive dynamics `x' = A x + diag(gamma) u` with
//! `A = W - I - diag(gamma)`, integrated by fixed-step classical
//! Runge-Kutta, plus the predicted consensus value and an empirical decay
//! exponent fitted from trajectories.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::hierarchy::WeightMatrix;
use crate::scalar;
use crate::{Error, Result};

/// Distances below this are floating-point noise and excluded from fits.
pub const NOISE_FLOOR: f64 = 1e-10;

/// Fraction of recorded times discarded as transient before rate fitting.
pub const TRANSIENT_FRACTION: f64 = 0.2;

/// Minimum usable points for a rate fit.
pub const MIN_FIT_POINTS: usize = 10;

/// Per-node constant inputs: intensities `gamma` (zero means no input) and
/// target values `u` (meaningful only where the intensity is positive).
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub gamma: DVector<f64>,
    pub u: DVector<f64>,
}

impl InputSpec {
    /// No input anywhere; the autonomous dynamics.
    pub fn none(n: usize) -> Self {
        Self { gamma: DVector::zeros(n), u: DVector::zeros(n) }
    }

    /// One input of intensity `gamma` and value `u` at a 1-based node index.
    pub fn single(n: usize, node: usize, gamma: f64, u: f64) -> Result<Self> {
        if node < 1 || node > n {
            return Err(Error::InvalidIndex);
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::Invalid("input intensity must be nonnegative and finite"));
        }
        if !u.is_finite() {
            return Err(Error::Invalid("input value must be finite"));
        }
        let mut spec = Self::none(n);
        spec.gamma[node - 1] = gamma;
        spec.u[node - 1] = u;
        Ok(spec)
    }

    pub fn new(gamma: DVector<f64>, u: DVector<f64>) -> Result<Self> {
        if gamma.len() != u.len() {
            return Err(Error::DimensionMismatch { expected: gamma.len(), got: u.len() });
        }
        if gamma.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::Invalid("input intensities must be nonnegative and finite"));
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("input values must be finite"));
        }
        Ok(Self { gamma, u })
    }

    pub fn is_autonomous(&self) -> bool {
        self.gamma.iter().all(|g| *g == 0.0)
    }

    /// The 1-based node index if exactly one intensity is positive.
    pub fn single_input_node(&self) -> Option<usize> {
        let mut found = None;
        for (k, g) in self.gamma.iter().enumerate() {
            if *g > 0.0 {
                if found.is_some() {
                    return None;
                }
                found = Some(k + 1);
            }
        }
        found
    }
}

/// Integration parameters: step, horizon, and recording stride.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Store every k-th step (the initial state is always stored).
    pub record_every: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { dt: 0.01, t_end: 200.0, record_every: 10 }
    }
}

/// Recorded states at strictly increasing times; `states[0]` is the
/// initial condition at time zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
}

/// The drift matrix `A = W - I - diag(gamma)`.
pub fn system_matrix(w: &WeightMatrix, input: &InputSpec) -> Result<DMatrix<f64>> {
    let n = w.n();
    if input.gamma.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: input.gamma.len() });
    }
    let mut a = w.entries().clone();
    for i in 0..n {
        a[(i, i)] -= 1.0 + input.gamma[i];
    }
    Ok(a)
}

/// Largest stable step for the fixed-step integrator. The spectral
/// abscissa of `A` is bounded by `2 + max gamma` in magnitude, so this
/// keeps the scheme comfortably inside its stability region.
pub fn max_stable_dt(input: &InputSpec) -> f64 {
    let gmax = input.gamma.iter().fold(0.0f64, |a, g| a.max(*g));
    0.1 / (2.0 + gmax)
}

/// Integrates `x' = A x + diag(gamma) u` from `x0` with classical
/// fourth-order Runge-Kutta. Records every `record_every`-th step plus the
/// final one; recorded times are exact step multiples. The number of steps
/// is `ceil(t_end/dt)` up to float quantization, so the final time may
/// exceed `t_end` by less than one step.
pub fn simulate(
    w: &WeightMatrix,
    input: &InputSpec,
    x0: &DVector<f64>,
    sim: &SimConfig,
) -> Result<Trajectory> {
    let n = w.n();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x0.len() });
    }
    if !(sim.dt.is_finite() && sim.dt > 0.0) {
        return Err(Error::Invalid("dt must be positive and finite"));
    }
    if !(sim.t_end.is_finite() && sim.t_end >= sim.dt) {
        return Err(Error::Invalid("t_end must be finite and at least dt"));
    }
    if sim.record_every == 0 {
        return Err(Error::Invalid("record_every must be at least 1"));
    }
    if x0.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("initial state must be finite"));
    }
    let max = max_stable_dt(input);
    if sim.dt > max {
        return Err(Error::StepTooLarge { max });
    }

    let a = system_matrix(w, input)?;
    let forcing = input.gamma.component_mul(&input.u);
    let steps = scalar::ceil((sim.t_end / sim.dt) - 1e-9).max(1.0) as usize;

    let mut times = Vec::with_capacity(steps / sim.record_every + 2);
    let mut states = Vec::with_capacity(steps / sim.record_every + 2);
    times.push(0.0);
    states.push(x0.clone());

    let mut x = x0.clone();
    let h = sim.dt;
    for k in 1..=steps {
        let k1 = &a * &x + &forcing;
        let k2 = &a * (&x + &k1 * (h / 2.0)) + &forcing;
        let k3 = &a * (&x + &k2 * (h / 2.0)) + &forcing;
        let k4 = &a * (&x + &k3 * h) + &forcing;
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        if k % sim.record_every == 0 || k == steps {
            times.push(k as f64 * h);
            states.push(x.clone());
        }
    }
    Ok(Trajectory { times, states })
}

/// Predicted limit of the autonomous dynamics: the inner product of the
/// stationary weight vector with the initial state. The weights must be
/// nonnegative and sum to one within 1e-10.
pub fn consensus_value(pi: &DVector<f64>, x0: &DVector<f64>) -> Result<f64> {
    if pi.len() != x0.len() {
        return Err(Error::DimensionMismatch { expected: pi.len(), got: x0.len() });
    }
    if pi.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(Error::NotNormalized);
    }
    if (pi.sum() - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized);
    }
    Ok(pi.dot(x0))
}

/// Fits the decay exponent of `||x(t) - target||` by least squares on
/// `-ln d` versus `t`. The first [`TRANSIENT_FRACTION`] of recorded times
/// is discarded (fast modes still mix there) and so are distances at the
/// noise floor; at least [`MIN_FIT_POINTS`] points must survive.
pub fn empirical_rate(traj: &Trajectory, target: &DVector<f64>) -> Result<f64> {
    let len = traj.times.len();
    if len != traj.states.len() {
        return Err(Error::DimensionMismatch { expected: len, got: traj.states.len() });
    }
    let start = scalar::ceil(TRANSIENT_FRACTION * len as f64) as usize;
    let mut ts = Vec::new();
    let mut zs = Vec::new();
    for k in start..len {
        if traj.states[k].len() != target.len() {
            return Err(Error::DimensionMismatch {
                expected: target.len(),
                got: traj.states[k].len(),
            });
        }
        let d = scalar::sqrt((&traj.states[k] - target).norm_squared());
        if d > NOISE_FLOOR {
            ts.push(traj.times[k]);
            zs.push(-scalar::ln(d));
        }
    }
    if ts.len() < MIN_FIT_POINTS {
        return Err(Error::Unfittable);
    }
    let count = ts.len() as f64;
    let t_mean = ts.iter().sum::<f64>() / count;
    let z_mean = zs.iter().sum::<f64>() / count;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (t, z) in ts.iter().zip(&zs) {
        cov += (t - t_mean) * (z - z_mean);
        var += (t - t_mean) * (t - t_mean);
    }
    if var == 0.0 {
        return Err(Error::Unfittable);
    }
    Ok(cov / var)
}
