//! Deterministic amplitude solvers, memory kernels and effective decay rates.
//!
//! Everything here is a pure function of its arguments. Photon amplitudes
//! of the environment are eliminated analytically; only the excited-state
//! amplitude `a(t)` (with `alpha(t) = a(t) alpha_0`) is ever represented.

mod amplitude;
mod memory;
mod params;
mod rate;
mod spectral;
mod volterra;
mod zeno;

pub use amplitude::{
    amplitude_from_roots, amplitude_lorentzian, amplitude_scaled, decay_roots, survival_repeated,
};
pub use memory::{memory_kernel, MemoryKernel, UniformGrid};
pub use params::{MeasurementSchedule, ScalingParams, SystemParams};
pub use rate::{
    effective_rate_empirical, effective_rate_scaled, null_probability, scaling_bracket, RateFlavor,
};
pub use spectral::SpectralDensity;
pub use volterra::{volterra_amplitude, AmplitudeSeries};
pub use zeno::{zeno_fidelity, zeno_retention, zeno_sequence, ZenoParams};
