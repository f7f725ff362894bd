use num_complex::Complex64;

use super::spectral::SpectralDensity;
use crate::error::{Error, Result};

/// Atom energies and the quantities derived from an attached Lorentzian spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub e_e: f64,
    pub e_g: f64,
    pub delta_eg: f64,
    pub rabi: f64,
    /// `E = delta_eg - omega0`
    pub detuning_e: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub omega0: f64,
}

impl SystemParams {
    /// Emits a warning when `omega0 < 5 lambda`: the symmetric Lorentzian
    /// model then reaches into negative frequencies and the scaling forms
    /// are no longer trustworthy.
    pub fn new(e_e: f64, e_g: f64, rabi: f64, sdf: &SpectralDensity) -> Result<Self> {
        let SpectralDensity::Lorentzian { omega0, lambda, .. } = *sdf else {
            return Err(Error::invalid("sdf", "system parameters need a Lorentzian spectrum"));
        };
        let gamma = sdf.gamma().unwrap_or(0.0);
        if !(gamma > 0.0) {
            return Err(Error::invalid("gamma", "must be positive"));
        }
        if omega0 < 5.0 * lambda {
            log::warn!(
                "spectral center omega0 = {omega0} is not well above the width lambda = {lambda}; \
                 the symmetric Lorentzian model assumes delta_eg > omega0 >> lambda"
            );
        }
        let delta_eg = e_e - e_g;
        Ok(SystemParams {
            e_e,
            e_g,
            delta_eg,
            rabi,
            detuning_e: delta_eg - omega0,
            gamma,
            lambda,
            omega0,
        })
    }
}

/// Dimensionless parameters of the scaling form: `x = lambda tau`, `c = E / lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingParams {
    pub x: f64,
    pub c: f64,
    pub kappa: Complex64,
    pub gamma: f64,
}

impl ScalingParams {
    pub fn new(x: f64, c: f64, gamma: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::invalid("x", "scaling variable must be positive and finite"));
        }
        if !c.is_finite() {
            return Err(Error::invalid("c", "must be finite"));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::invalid("gamma", "must be positive"));
        }
        Ok(ScalingParams {
            x,
            c,
            kappa: Complex64::new(1.0, -c),
            gamma,
        })
    }

    /// From the explicit bandwidth, measurement interval and energy offset.
    pub fn from_explicit(lambda: f64, tau: f64, e: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::invalid("lambda", "must be positive"));
        }
        Self::new(lambda * tau, e / lambda, gamma)
    }
}

/// Measurement interval `tau` and coarse step `dt = n tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSchedule {
    pub tau: f64,
    pub n: u64,
    pub dt: f64,
}

impl MeasurementSchedule {
    pub fn new(tau: f64, n: u64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::invalid("tau", "must be positive"));
        }
        if n == 0 {
            return Err(Error::invalid("n", "need at least one measurement per step"));
        }
        Ok(MeasurementSchedule { tau, n, dt: n as f64 * tau })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let sdf = SpectralDensity::lorentzian_with_rate(1.0, 100.0, 10.0).unwrap();
        let p = SystemParams::new(101.5, 0.5, 0.1, &sdf).unwrap();
        assert_eq!(p.delta_eg, 101.0);
        assert_eq!(p.detuning_e, 1.0);
        assert!((p.gamma - 1.0).abs() < 1e-15);

        let s = ScalingParams::from_explicit(10.0, 0.02, 5.0, 1.0).unwrap();
        assert_eq!(s.x, 10.0 * 0.02);
        assert_eq!(s.c, 0.5);
        assert_eq!(s.kappa, Complex64::new(1.0, -0.5));

        let m = MeasurementSchedule::new(0.02, 5).unwrap();
        assert_eq!(m.dt, 5.0 * 0.02);
        assert!(MeasurementSchedule::new(0.02, 0).is_err());
        assert!(ScalingParams::new(0.0, 0.0, 1.0).is_err());
    }
}
