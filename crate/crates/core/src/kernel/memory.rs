use std::f64::consts::PI;

use num_complex::Complex64;

use super::spectral::SpectralDensity;
use crate::error::{Error, Result};

/// Uniform time grid `t_k = k h`, `k = 0..len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    pub h: f64,
    pub len: usize,
}

impl UniformGrid {
    pub fn new(h: f64, len: usize) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::invalid("h", "grid spacing must be positive"));
        }
        if len == 0 {
            return Err(Error::invalid("len", "grid needs at least one point"));
        }
        Ok(UniformGrid { h, len })
    }

    /// Grid covering `[0, t_final]` with spacing `h`; `t_final` is rounded to
    /// the nearest multiple of `h`.
    pub fn covering(t_final: f64, h: f64) -> Result<Self> {
        if !(t_final >= 0.0) {
            return Err(Error::invalid("t_final", "must be nonnegative"));
        }
        Self::new(h, (t_final / h).round() as usize + 1)
    }

    pub fn at(&self, k: usize) -> f64 {
        k as f64 * self.h
    }

    pub fn last(&self) -> f64 {
        self.at(self.len - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len).map(move |k| self.at(k))
    }
}

/// Time-domain self-energy `F(s)` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MemoryKernel {
    pub grid: UniformGrid,
    pub values: Vec<Complex64>,
}

/// `F(s) = -i int dw D(w) e^{-i (w + e_g) s}`.
///
/// Lorentzian spectra use the closed form
/// `-i (gamma lambda / 2) e^{-i (omega0 + e_g) s} e^{-lambda s}`; tabulated
/// spectra are integrated with the trapezoidal rule, which requires
/// `max spacing * s_max < pi / 4`.
pub fn memory_kernel(sdf: &SpectralDensity, e_g: f64, grid: UniformGrid) -> Result<MemoryKernel> {
    let minus_i = Complex64::new(0.0, -1.0);
    let values = match sdf {
        SpectralDensity::Lorentzian { omega0, lambda, .. } => {
            let gamma = sdf.gamma().expect("lorentzian");
            let amp = minus_i * (0.5 * gamma * lambda);
            grid.points()
                .map(|s| amp * Complex64::from_polar((-lambda * s).exp(), -(omega0 + e_g) * s))
                .collect()
        }
        SpectralDensity::Tabulated { samples } => {
            let spacing = samples
                .windows(2)
                .map(|w| w[1].0 - w[0].0)
                .fold(0.0, f64::max);
            let horizon = grid.last();
            let product = spacing * horizon;
            if product >= PI / 4.0 {
                return Err(Error::Resolution { spacing, horizon, product });
            }
            grid.points()
                .map(|s| minus_i * trapezoid_fourier(samples, e_g, s))
                .collect()
        }
    };
    Ok(MemoryKernel { grid, values })
}

fn trapezoid_fourier(samples: &[(f64, f64)], e_g: f64, s: f64) -> Complex64 {
    let f = |&(w, d): &(f64, f64)| Complex64::from_polar(d, -(w + e_g) * s);
    samples
        .windows(2)
        .map(|p| (f(&p[0]) + f(&p[1])) * (0.5 * (p[1].0 - p[0].0)))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishing_spectrum_gives_zero_kernel() {
        let sdf = SpectralDensity::tabulated(vec![(-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]).unwrap();
        let k = memory_kernel(&sdf, 0.3, UniformGrid::new(0.01, 50).unwrap()).unwrap();
        assert!(k.values.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn lorentzian_closed_form_at_origin() {
        let sdf = SpectralDensity::lorentzian_with_rate(1.0, 50.0, 10.0).unwrap();
        let k = memory_kernel(&sdf, -2.0, UniformGrid::new(0.01, 3).unwrap()).unwrap();
        assert!((k.values[0] - Complex64::new(0.0, -5.0)).norm() < 1e-14);
    }

    #[test]
    fn tabulated_lorentzian_matches_closed_form() {
        // tails beyond +-W carry 2 lambda / (pi W) of the weight
        let (gamma, omega0, lambda, e_g) = (1.0, 3.0, 1.0, 0.5);
        let sdf = SpectralDensity::lorentzian_with_rate(gamma, omega0, lambda).unwrap();
        let half_width = 4000.0;
        let table = SpectralDensity::tabulate(
            |w| sdf.evaluate(w),
            omega0 - half_width,
            omega0 + half_width,
            64_001,
        )
        .unwrap();
        let grid = UniformGrid::new(0.05, 41).unwrap();
        let exact = memory_kernel(&sdf, e_g, grid).unwrap();
        let quad = memory_kernel(&table, e_g, grid).unwrap();
        let tol = 1e-4 * gamma * lambda;
        for (a, b) in exact.values.iter().zip(&quad.values) {
            assert!((a - b).norm() <= tol, "{a} vs {b}");
        }
    }

    #[test]
    fn coarse_table_is_refused() {
        let table = SpectralDensity::tabulate(|_| 1.0, -10.0, 10.0, 21).unwrap();
        let err = memory_kernel(&table, 0.0, UniformGrid::new(0.1, 11).unwrap()).unwrap_err();
        assert!(matches!(err, Error::Resolution { .. }));
    }

    #[test]
    fn grid_helpers() {
        let g = UniformGrid::covering(5.0, 1e-3).unwrap();
        assert_eq!(g.len, 5001);
        assert!((g.last() - 5.0).abs() < 1e-12);
        assert!(UniformGrid::new(0.0, 3).is_err());
    }
}
