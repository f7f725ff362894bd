use rand::Rng;

use super::drive::{DriveHamiltonian, NullMonitor};
use super::record::{Events, StateSeries, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::rng::trajectory_stream;
use crate::state::PureState;

/// Upper bound on `rate * dt` for a single-draw jump decision.
pub const MAX_JUMP_PROBABILITY: f64 = 0.1;

/// One coarse step of the jump unraveling.
///
/// With probability `|alpha|^2 rate dt` (decided by `u < p`) the state jumps
/// to `|g>`. Otherwise it evolves by half a drive step, the null-result
/// filter `diag(abar, 1)`, and another half drive step, then renormalizes.
pub fn mcwf_step(
    state: &PureState,
    monitor: &NullMonitor,
    h_s: &DriveHamiltonian,
    u: f64,
) -> Result<(PureState, bool)> {
    let budget = monitor.rate * monitor.dt;
    if budget > MAX_JUMP_PROBABILITY {
        return Err(Error::StepGuard(format!(
            "rate * dt = {budget} exceeds {MAX_JUMP_PROBABILITY}; reduce dt"
        )));
    }
    let p_jump = state.excited_population() * budget;
    if u < p_jump {
        return Ok((PureState::ground(), true));
    }
    let half = h_s.propagator(0.5 * monitor.dt);
    let filter = Mat2::new(monitor.abar, crate::linalg::ZERO, crate::linalg::ZERO, crate::linalg::ONE);
    let [a, b] = (half * filter * half).apply(state.as_vec());
    Ok((PureState::new(a, b)?, false))
}

/// Jump trajectory over `[0, t_final]` with steps of `monitor.dt`, seeded
/// from stream 0 of `seed`.
pub fn mcwf_trajectory(
    initial: PureState,
    h_s: &DriveHamiltonian,
    monitor: &NullMonitor,
    t_final: f64,
    seed: u64,
) -> Result<TrajectoryRecord> {
    let mut rng = trajectory_stream(seed, 0);
    mcwf_trajectory_with_rng(initial, h_s, monitor, t_final, seed, &mut rng)
}

pub fn mcwf_trajectory_with_rng<R: Rng>(
    initial: PureState,
    h_s: &DriveHamiltonian,
    monitor: &NullMonitor,
    t_final: f64,
    seed: u64,
    rng: &mut R,
) -> Result<TrajectoryRecord> {
    if !(t_final >= 0.0) {
        return Err(Error::invalid("t_final", "must be nonnegative"));
    }
    let steps = (t_final / monitor.dt).round() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut jumps = Vec::with_capacity(steps);
    let mut state = initial;
    times.push(0.0);
    states.push(state);
    for k in 0..steps {
        let u: f64 = rng.gen();
        let (next, jumped) = mcwf_step(&state, monitor, h_s, u)?;
        state = next;
        times.push((k + 1) as f64 * monitor.dt);
        states.push(state);
        jumps.push(jumped);
    }
    Ok(TrajectoryRecord {
        times,
        states: StateSeries::Pure(states),
        events: Events::Jumps(jumps),
        seed,
        clamp_count: 0,
    })
}
