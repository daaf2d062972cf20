use crate::error::{Error, Result};
use crate::operators::{bn_eigenvalues, ShenSystem};
use crate::scalar::{all_finite, max_abs, Real};

use super::TimeStepper;

/// Final state and the snapshots requested from [`integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub steps: usize,
    pub final_time: T,
    pub final_state: Vec<T>,
    /// `(step index, time, state)`, with `time = step * dt`.
    pub snapshots: Vec<(usize, T, Vec<T>)>,
}

/// Takes `steps` steps from `t = 0`, recording the state after every step listed
/// in `snapshot_steps` (step 0 is the initial state).
pub fn integrate<T: Real>(
    stepper: &mut dyn TimeStepper<T>,
    initial: &[T],
    steps: usize,
    snapshot_steps: &[usize],
) -> Result<Trajectory<T>> {
    let dt = stepper.dt();
    let mut v = initial.to_vec();
    let mut snapshots = Vec::new();
    if snapshot_steps.contains(&0) {
        snapshots.push((0, T::zero(), v.clone()));
    }
    for k in 0..steps {
        let t = T::from_usize_lossy(k) * dt;
        stepper.step(&mut v, t)?;
        if !all_finite(&v) {
            return Err(Error::NonFiniteState {
                step: k + 1,
                max_abs: max_abs(&v).to_f64().unwrap_or(f64::NAN),
            });
        }
        if snapshot_steps.contains(&(k + 1)) {
            snapshots.push((k + 1, T::from_usize_lossy(k + 1) * dt, v.clone()));
        }
    }
    Ok(Trajectory {
        steps,
        final_time: T::from_usize_lossy(steps) * dt,
        final_state: v,
        snapshots,
    })
}

/// Number of steps of size close to `dt` that reach `t_end`, and the adjusted step.
pub fn step_count<T: Real>(t_end: T, dt: T) -> Result<(usize, T)> {
    if !(dt > T::zero()) || !(t_end >= T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0 and t_end >= 0, got dt = {dt}, t_end = {t_end}"
        )));
    }
    let steps = (t_end / dt).round().to_usize().unwrap_or(0);
    if steps == 0 {
        return Ok((0, dt));
    }
    Ok((steps, t_end / T::from_usize_lossy(steps)))
}

/// Forward Euler monotonicity bound `Δt_FE = (a + λ_min(B_N)) / b`.
pub fn ssp_timestep_bound<T: Real>(shen: &ShenSystem<T>) -> Result<T> {
    let lambda = bn_eigenvalues::<T>(shen.degree())?[0];
    Ok((shen.a + lambda) / shen.b)
}
