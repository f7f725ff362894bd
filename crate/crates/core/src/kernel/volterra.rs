use num_complex::Complex64;

use super::memory::{MemoryKernel, UniformGrid};
use crate::error::{Error, Result};

/// Allowed excursion of `|a|` above one before integration is aborted.
const INSTABILITY_MARGIN: f64 = 0.01;

/// Complex amplitude `a(t_k)` on a uniform grid, with `a(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    pub grid: UniformGrid,
    pub values: Vec<Complex64>,
}

/// Solves `i a'(t) = e_e a(t) + int_0^t F(t - t') a(t') dt'` with `a(0) = 1`.
///
/// Integration runs on the kernel grid with Heun steps (Euler predictor,
/// trapezoidal corrector) and trapezoidal quadrature of the history; the
/// scheme is second order in the kernel spacing. The free phase `e^{-i e_e t}`
/// is factored out exactly before stepping, so a large `e_e` costs nothing. The output grid spacing
/// must be an integer multiple of the kernel spacing, and the kernel must
/// reach the last output time.
///
/// The result is in the lab frame: for a Lorentzian kernel it equals
/// `e^{-i e_e t}` times the rotating-frame amplitude of
/// [`amplitude_lorentzian`](super::amplitude_lorentzian).
pub fn volterra_amplitude(
    kernel: &MemoryKernel,
    e_e: f64,
    grid: UniformGrid,
) -> Result<AmplitudeSeries> {
    let h = kernel.grid.h;
    let ratio = grid.h / h;
    let stride = ratio.round();
    if stride < 1.0 || (ratio - stride).abs() > 1e-9 * ratio {
        return Err(Error::GridMismatch(format!(
            "output spacing {} is not an integer multiple of kernel spacing {h}",
            grid.h
        )));
    }
    let stride = stride as usize;
    let steps = (grid.len - 1) * stride;
    if kernel.values.len() < steps + 1 || kernel.values.len() != kernel.grid.len {
        return Err(Error::GridMismatch(format!(
            "kernel covers {} points, integration needs {}",
            kernel.values.len(),
            steps + 1
        )));
    }
    if !kernel.values[0].is_finite() {
        return Err(Error::invalid("kernel", "F(0) must be finite"));
    }

    // rotating frame: a = e^{-i e_e t} b, with kernel F(s) e^{i e_e s}
    let f: Vec<Complex64> = kernel.values[..=steps]
        .iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(1.0, e_e * k as f64 * h))
        .collect();
    let f = &f;
    let minus_i = Complex64::new(0.0, -1.0);
    let mut y = Vec::with_capacity(steps + 1);
    y.push(Complex64::new(1.0, 0.0));

    // history(n, y_n) = h [F_n y_0 / 2 + sum_{j=1}^{n-1} F_{n-j} y_j + F_0 y_n / 2]
    let history = |y: &[Complex64], n: usize, y_n: Complex64| -> Complex64 {
        if n == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let inner: Complex64 = (1..n).map(|j| f[n - j] * y[j]).sum();
        (inner + 0.5 * (f[n] * y[0] + f[0] * y_n)) * h
    };
    let rhs = |y: &[Complex64], n: usize, y_n: Complex64| -> Complex64 {
        minus_i * history(y, n, y_n)
    };

    for n in 0..steps {
        let y_n = y[n];
        let f_n = rhs(&y, n, y_n);
        let predicted = y_n + f_n * h;
        let f_next = rhs(&y, n + 1, predicted);
        let next = y_n + (f_n + f_next) * (0.5 * h);
        let magnitude = next.norm();
        if !(magnitude <= 1.0 + INSTABILITY_MARGIN) {
            return Err(Error::Instability {
                step: n + 1,
                time: (n + 1) as f64 * h,
                magnitude,
            });
        }
        y.push(next);
    }

    let values = y
        .into_iter()
        .enumerate()
        .step_by(stride)
        .map(|(k, b)| b * Complex64::from_polar(1.0, -e_e * k as f64 * h))
        .collect();
    Ok(AmplitudeSeries { grid, values })
}

impl AmplitudeSeries {
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.grid.points()
    }
}
