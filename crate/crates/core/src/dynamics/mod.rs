//! Single-trajectory steppers (jump and diffusive unravelings) and
//! deterministic density-matrix evolution under the effective decay rate.

mod drive;
mod homodyne;
mod master;
mod mcwf;
mod record;
mod superop;

pub use drive::{DriveHamiltonian, HomodyneConfig, NullMonitor};
pub use homodyne::{
    homodyne_step, homodyne_trajectory, homodyne_trajectory_with_noise, HomodyneStep,
};
pub use master::{master_evolve, master_step_guard};
pub use mcwf::{mcwf_step, mcwf_trajectory, mcwf_trajectory_with_rng, MAX_JUMP_PROBABILITY};
pub use record::{Events, StateSeries, TrajectoryRecord};
pub use superop::{dissipator, lindblad_rhs, measurement_superop};
