use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{
    amplitude_scaled, effective_rate_empirical, effective_rate_scaled, survival_repeated,
    MeasurementSchedule, RateFlavor, ScalingParams,
};
use crate::linalg::{Mat2, I};

/// `H_S = (delta_eg / 2) sigma_z + rabi sigma_x`.
///
/// `delta_eg` is taken in the frame the simulation runs in; for resonant
/// driving in the rotating frame it is zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveHamiltonian {
    pub delta_eg: f64,
    pub rabi: f64,
}

impl DriveHamiltonian {
    pub fn new(delta_eg: f64, rabi: f64) -> Self {
        DriveHamiltonian { delta_eg, rabi }
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::sigma_z().scale_re(0.5 * self.delta_eg) + Mat2::sigma_x().scale_re(self.rabi)
    }

    /// `exp(-i H t) = cos(w t) - i sin(w t) H / w`, `w = sqrt(delta^2/4 + rabi^2)`.
    pub fn propagator(&self, t: f64) -> Mat2 {
        let w = (0.25 * self.delta_eg * self.delta_eg + self.rabi * self.rabi).sqrt();
        if w == 0.0 {
            return Mat2::identity();
        }
        let (s, c) = (w * t).sin_cos();
        Mat2::identity().scale_re(c) - self.matrix().scale(I * (s / w))
    }

    /// Largest frequency scale, used by step-size guards.
    pub fn max_frequency(&self) -> f64 {
        self.rabi.abs().max(self.delta_eg.abs())
    }
}

/// Local-oscillator phase and integration step of the homodyne unraveling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneConfig {
    pub phi: f64,
    pub dt: f64,
}

impl HomodyneConfig {
    pub fn new(phi: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", "must be positive"));
        }
        Ok(HomodyneConfig { phi, dt })
    }
}

/// Effect of frequent null-result monitoring over one coarse step `dt`:
/// the effective rate and the survival amplitude `abar(dt)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullMonitor {
    pub dt: f64,
    pub rate: f64,
    pub abar: Complex64,
}

impl NullMonitor {
    /// Scaling limit: rate from the closed form, `abar(dt)` from the scaled amplitude.
    pub fn scaled(scaling: &ScalingParams, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", "must be positive"));
        }
        Ok(NullMonitor {
            dt,
            rate: effective_rate_scaled(scaling),
            abar: amplitude_scaled(dt, scaling)?,
        })
    }

    /// Finite bandwidth and interval: `abar = a(tau)^n`, rate from `-ln|abar|^2 / dt`.
    pub fn repeated(schedule: &MeasurementSchedule, lambda: f64, gamma: f64, e: f64) -> Result<Self> {
        let abar = survival_repeated(schedule.tau, schedule.n, lambda, gamma, e)?;
        Ok(NullMonitor {
            dt: schedule.dt,
            rate: effective_rate_empirical(abar, schedule.dt, RateFlavor::Log)?,
            abar,
        })
    }

    /// No monitoring-induced decay at all (`x -> 0`).
    pub fn frozen(dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", "must be positive"));
        }
        Ok(NullMonitor { dt, rate: 0.0, abar: Complex64::new(1.0, 0.0) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn propagator_is_unitary_and_composes() {
        let h = DriveHamiltonian::new(0.7, 0.3);
        let u = h.propagator(0.9);
        assert!((u * u.dagger() - Mat2::identity()).max_abs() < 1e-14);
        let half = h.propagator(0.45);
        assert!((half * half - u).max_abs() < 1e-14);
        assert_eq!(DriveHamiltonian::new(0.0, 0.0).propagator(3.0), Mat2::identity());
    }

    #[test]
    fn propagator_solves_schrodinger_equation() {
        let h = DriveHamiltonian::new(0.4, 0.25);
        let eps = 1e-6;
        let du = (h.propagator(1.0 + eps) - h.propagator(1.0 - eps)).scale_re(0.5 / eps);
        let rhs = (h.matrix() * h.propagator(1.0)).scale(-I);
        assert!((du - rhs).max_abs() < 1e-8);
    }

    #[test]
    fn monitors_agree_in_scaling_regime() {
        let (gamma, lambda, x) = (1.0, 1000.0, 0.2);
        let scaling = ScalingParams::new(x, 0.0, gamma).unwrap();
        let schedule = MeasurementSchedule::new(x / lambda, 50).unwrap();
        let rep = NullMonitor::repeated(&schedule, lambda, gamma, 0.0).unwrap();
        let sc = NullMonitor::scaled(&scaling, schedule.dt).unwrap();
        assert!((rep.rate - sc.rate).abs() < 1e-2 * sc.rate);
        assert!((rep.abar.norm() - sc.abar.norm()).abs() < 1e-4);
    }
}
