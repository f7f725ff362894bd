use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::drive::{DriveHamiltonian, HomodyneConfig};
use super::master::master_step_guard;
use super::record::{Events, StateSeries, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::rng::trajectory_stream;
use crate::state::DensityMatrix;

/// Eigenvalues below this are repaired after each step.
const POSITIVITY_FLOOR: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneStep {
    pub rho: DensityMatrix,
    /// `sqrt(rate) <e^{-i phi} s- + e^{i phi} s+> / 2 + dW / dt`, evaluated on the input state.
    pub current: f64,
    pub clamped: bool,
}

/// Euler-Maruyama step of the diffusive (Ito) unraveling,
/// `rho + L rho dt + sqrt(rate) H[e^{-i phi} s-] rho dW`,
/// followed by Hermitization, trace renormalization and, when an eigenvalue
/// falls below `-1e-9`, projection back onto the Bloch ball.
pub fn homodyne_step(
    rho: &DensityMatrix,
    h_s: &DriveHamiltonian,
    rate: f64,
    config: &HomodyneConfig,
    dw: f64,
) -> HomodyneStep {
    let dt = config.dt;
    let sqrt_rate = rate.max(0.0).sqrt();
    let phase = Complex64::from_polar(1.0, config.phi);
    let (p, c) = (rho.rho_ee, rho.rho_eg);
    // <e^{-i phi} s- + h.c.> = 2 Re(e^{-i phi} rho_eg)
    let quadrature = 2.0 * (phase.conj() * c).re;
    let current = 0.5 * sqrt_rate * quadrature + dw / dt;

    // Lindblad drift and measurement back-action on the (ee, eg) entries;
    // the gg entry takes minus the ee change so the trace is untouched.
    let (delta, rabi) = (h_s.delta_eg, h_s.rabi);
    let drift_ee = -2.0 * rabi * c.im - rate * p;
    let drift_eg = Complex64::new(0.0, -1.0) * (delta * c + rabi * (rho.rho_gg - p)) - 0.5 * rate * c;
    let kick = sqrt_rate * dw;
    let d_ee = drift_ee * dt - kick * quadrature * p;
    let d_eg = drift_eg * dt + (phase * p - c * quadrature) * kick;
    let mut next = DensityMatrix {
        rho_ee: p + d_ee,
        rho_gg: rho.rho_gg - d_ee,
        rho_eg: c + d_eg,
    };
    let trace = next.trace();
    next = next.lin_comb(1.0 / trace, &next, 0.0);

    let mut clamped = false;
    if next.min_eigenvalue() < POSITIVITY_FLOOR {
        next = project_to_bloch_ball(&next);
        clamped = true;
    }
    HomodyneStep { rho: next, current, clamped }
}

/// For a unit-trace 2x2 matrix a negative eigenvalue means a Bloch vector
/// longer than one; dropping it leaves the pure state along that direction.
fn project_to_bloch_ball(rho: &DensityMatrix) -> DensityMatrix {
    let [x, y, z] = rho.bloch();
    let r = (x * x + y * y + z * z).sqrt();
    let (x, y, z) = (x / r, y / r, z / r);
    DensityMatrix {
        rho_ee: 0.5 * (1.0 + z),
        rho_gg: 0.5 * (1.0 - z),
        rho_eg: Complex64::new(0.5 * x, -0.5 * y),
    }
}

/// Diffusive trajectory driven by standard-normal draws from stream 0 of `seed`.
pub fn homodyne_trajectory(
    initial: &DensityMatrix,
    h_s: &DriveHamiltonian,
    rate: f64,
    config: &HomodyneConfig,
    t_final: f64,
    seed: u64,
) -> Result<TrajectoryRecord> {
    let mut rng = trajectory_stream(seed, 0);
    homodyne_trajectory_with_noise(initial, h_s, rate, config, t_final, seed, || {
        rng.sample(StandardNormal)
    })
}

/// As [`homodyne_trajectory`], with `noise` supplying standard-normal
/// variates (scaled by `sqrt(dt)` internally). A constant-zero source gives
/// the deterministic Euler solution of the master equation.
pub fn homodyne_trajectory_with_noise<N: FnMut() -> f64>(
    initial: &DensityMatrix,
    h_s: &DriveHamiltonian,
    rate: f64,
    config: &HomodyneConfig,
    t_final: f64,
    seed: u64,
    mut noise: N,
) -> Result<TrajectoryRecord> {
    master_step_guard(h_s, rate, config.dt)?;
    if !(t_final >= 0.0) {
        return Err(Error::invalid("t_final", "must be nonnegative"));
    }
    let steps = (t_final / config.dt).round() as usize;
    let sqrt_dt = config.dt.sqrt();
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut current = Vec::with_capacity(steps);
    let mut clamp_count = 0;
    let mut rho = *initial;
    times.push(0.0);
    states.push(rho);
    for k in 0..steps {
        let step = homodyne_step(&rho, h_s, rate, config, noise() * sqrt_dt);
        rho = step.rho;
        clamp_count += step.clamped as usize;
        times.push((k + 1) as f64 * config.dt);
        states.push(rho);
        current.push(step.current);
    }
    Ok(TrajectoryRecord {
        times,
        states: StateSeries::Mixed(states),
        events: Events::Current(current),
        seed,
        clamp_count,
    })
}
