use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Environment spectral density `D(omega)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralDensity {
    /// `D(w) = d0 * lambda^2 / ((w - omega0)^2 + lambda^2)`
    Lorentzian { d0: f64, omega0: f64, lambda: f64 },
    /// Samples `(w_r, D(w_r))` on a strictly increasing grid.
    Tabulated { samples: Vec<(f64, f64)> },
}

impl SpectralDensity {
    pub fn lorentzian(d0: f64, omega0: f64, lambda: f64) -> Result<Self> {
        if !(d0 > 0.0 && d0.is_finite()) {
            return Err(Error::invalid("d0", "spectral height must be positive"));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid("lambda", "half-width must be positive"));
        }
        if !omega0.is_finite() {
            return Err(Error::invalid("omega0", "must be finite"));
        }
        Ok(SpectralDensity::Lorentzian { d0, omega0, lambda })
    }

    /// Lorentzian parameterized by its wide-band decay rate `gamma = 2 pi d0`.
    pub fn lorentzian_with_rate(gamma: f64, omega0: f64, lambda: f64) -> Result<Self> {
        Self::lorentzian(gamma / (2.0 * PI), omega0, lambda)
    }

    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::invalid("samples", "need at least 2 samples"));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::invalid("samples", "frequency grid must be strictly increasing"));
        }
        if samples.iter().any(|&(w, d)| !w.is_finite() || !(d >= 0.0) || !d.is_finite()) {
            return Err(Error::invalid("samples", "values must be finite with D >= 0"));
        }
        Ok(SpectralDensity::Tabulated { samples })
    }

    /// Tabulates `f` on `n` uniform points over `[w_min, w_max]`.
    pub fn tabulate(f: impl Fn(f64) -> f64, w_min: f64, w_max: f64, n: usize) -> Result<Self> {
        if n < 2 || !(w_max > w_min) {
            return Err(Error::invalid("samples", "need n >= 2 and w_max > w_min"));
        }
        let step = (w_max - w_min) / (n - 1) as f64;
        let samples = (0..n)
            .map(|k| {
                let w = w_min + step * k as f64;
                (w, f(w))
            })
            .collect();
        Self::tabulated(samples)
    }

    pub fn evaluate(&self, w: f64) -> f64 {
        match self {
            SpectralDensity::Lorentzian { d0, omega0, lambda } => {
                d0 * lambda * lambda / ((w - omega0).powi(2) + lambda * lambda)
            }
            SpectralDensity::Tabulated { samples } => {
                let idx = samples.partition_point(|&(x, _)| x <= w);
                if idx == 0 || idx == samples.len() {
                    if idx == samples.len() && w == samples[idx - 1].0 {
                        return samples[idx - 1].1;
                    }
                    return 0.0;
                }
                let (x0, y0) = samples[idx - 1];
                let (x1, y1) = samples[idx];
                y0 + (y1 - y0) * (w - x0) / (x1 - x0)
            }
        }
    }

    /// Wide-band decay rate `2 pi d0` (Lorentzian only).
    pub fn gamma(&self) -> Option<f64> {
        match self {
            SpectralDensity::Lorentzian { d0, .. } => Some(2.0 * PI * d0),
            SpectralDensity::Tabulated { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_is_two_pi_d0() {
        let sdf = SpectralDensity::lorentzian(0.25, 100.0, 10.0).unwrap();
        assert_eq!(sdf.gamma(), Some(2.0 * PI * 0.25));
        let sdf = SpectralDensity::lorentzian_with_rate(1.0, 100.0, 10.0).unwrap();
        assert!((sdf.gamma().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(SpectralDensity::lorentzian(0.0, 0.0, 1.0).is_err());
        assert!(SpectralDensity::lorentzian(1.0, 0.0, -1.0).is_err());
        assert!(SpectralDensity::tabulated(vec![(0.0, 1.0)]).is_err());
        assert!(SpectralDensity::tabulated(vec![(0.0, 1.0), (0.0, 1.0)]).is_err());
        assert!(SpectralDensity::tabulated(vec![(0.0, 1.0), (1.0, -0.1)]).is_err());
    }

    #[test]
    fn tabulated_interpolates_linearly() {
        let sdf = SpectralDensity::tabulated(vec![(0.0, 0.0), (2.0, 4.0)]).unwrap();
        assert_eq!(sdf.evaluate(1.0), 2.0);
        assert_eq!(sdf.evaluate(2.0), 4.0);
        assert_eq!(sdf.evaluate(-1.0), 0.0);
        assert_eq!(sdf.evaluate(3.0), 0.0);
    }
}
