use num_complex::Complex64;

use super::params::ScalingParams;
use crate::error::{Error, Result};

/// Below this `|k x|` the bracket is evaluated from its power series.
const SERIES_CUTOFF: f64 = 1e-2;

/// `1/k - (1 - e^{-k x}) / (k^2 x)`; its real part times `gamma` is the
/// effective decay rate.
pub fn scaling_bracket(x: f64, kappa: Complex64) -> Complex64 {
    let w = kappa * x;
    if w.norm() < SERIES_CUTOFF {
        // 1 - (1 - e^{-w})/w = -sum_{k>=1} (-w)^k / (k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut fact = 1.0;
        for k in 1..=7 {
            term *= -w;
            fact *= (k + 1) as f64;
            sum -= term / fact;
        }
        return sum / kappa;
    }
    (1.0 - (1.0 - (-w).exp()) / w) / kappa
}

/// Measurement-frequency-dependent decay rate
/// `gamma Re{[1 - (1 - e^{-k x}) / (k x)] / k}`.
pub fn effective_rate_scaled(scaling: &ScalingParams) -> f64 {
    scaling.gamma * scaling_bracket(scaling.x, scaling.kappa).re
}

/// How an empirical rate is extracted from the survival amplitude over `dt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateFlavor {
    /// `(1 - |a|^2) / dt`
    Linear,
    /// `-ln(|a|^2) / dt`
    Log,
}

pub fn effective_rate_empirical(abar: Complex64, dt: f64, flavor: RateFlavor) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let p = abar.norm_sqr();
    if !p.is_finite() || p > 1.0 + 1e-12 {
        return Err(Error::invalid("abar", format!("|abar|^2 = {p} exceeds 1")));
    }
    match flavor {
        RateFlavor::Linear => Ok((1.0 - p) / dt),
        RateFlavor::Log => {
            if p == 0.0 {
                return Err(Error::OutOfDomain(
                    "log rate undefined for vanishing survival amplitude".into(),
                ));
            }
            Ok(-p.ln() / dt)
        }
    }
}

/// Joint probability of null results `|abar alpha0|^2 + |beta0|^2`.
///
/// The click probability over the same window is one minus this value.
/// The input state is expected to be normalized.
pub fn null_probability(abar: Complex64, alpha0: Complex64, beta0: Complex64) -> f64 {
    debug_assert!((alpha0.norm_sqr() + beta0.norm_sqr() - 1.0).abs() < 1e-9);
    (abar * alpha0).norm_sqr() + beta0.norm_sqr()
}
