use num_complex::Complex64;

use super::params::ScalingParams;
use super::rate::scaling_bracket;
use crate::error::{Error, Result};

/// Relative root separation below which the confluent formula is used.
const DEGENERATE_ROOTS: f64 = 1e-8;

/// Roots `(A+, A-)` of `A^2 - (lambda - iE) A + gamma lambda / 2 = 0`.
///
/// `A+` carries the principal square root. The larger-magnitude root is
/// computed first and the other one from the product `A+ A- = gamma lambda / 2`,
/// so the small root keeps full relative precision for `lambda >> gamma`.
pub fn decay_roots(lambda: f64, gamma: f64, e: f64) -> (Complex64, Complex64) {
    let z = Complex64::new(lambda, -e);
    let product = Complex64::new(0.5 * gamma * lambda, 0.0);
    let disc = (z * z - 4.0 * product).sqrt();
    let (plus, minus) = (z + disc, z - disc);
    if plus.norm() >= minus.norm() {
        let ap = plus * 0.5;
        (ap, product / ap)
    } else {
        let am = minus * 0.5;
        (product / am, am)
    }
}

/// `a(t) = (A+ e^{-A- t} - A- e^{-A+ t}) / (A+ - A-)`, with the confluent
/// limit `(1 + A t) e^{-A t}` when the roots coincide.
///
/// The expression is symmetric under exchanging the two roots.
pub fn amplitude_from_roots(t: f64, ap: Complex64, am: Complex64) -> Complex64 {
    if t == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let diff = ap - am;
    if diff.norm() < DEGENERATE_ROOTS * ap.norm().max(am.norm()) {
        let a = (ap + am) * 0.5;
        return (1.0 + a * t) * (-a * t).exp();
    }
    (ap * (-am * t).exp() - am * (-ap * t).exp()) / diff
}

fn check_rates(lambda: f64, gamma: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid("lambda", "must be positive"));
    }
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::invalid("gamma", "must be positive"));
    }
    Ok(())
}

/// Excited-state survival amplitude for a Lorentzian environment with
/// half-width `lambda`, wide-band rate `gamma` and energy offset `e`.
pub fn amplitude_lorentzian(t: f64, lambda: f64, gamma: f64, e: f64) -> Result<Complex64> {
    check_rates(lambda, gamma)?;
    if !(t >= 0.0) {
        return Err(Error::invalid("t", "must be nonnegative"));
    }
    let (ap, am) = decay_roots(lambda, gamma, e);
    Ok(amplitude_from_roots(t, ap, am))
}

/// Amplitude after `n` null-result measurements spaced by `tau`: `a(tau)^n`.
///
/// Evaluated as `exp(n log a(tau))`. For integer `n` the result does not
/// depend on the log branch; a continuous branch would only matter for
/// fractional powers, which are not offered.
pub fn survival_repeated(tau: f64, n: u64, lambda: f64, gamma: f64, e: f64) -> Result<Complex64> {
    if !(tau > 0.0) {
        return Err(Error::invalid("tau", "must be positive"));
    }
    if n == 0 {
        return Err(Error::invalid("n", "need at least one measurement"));
    }
    let single = amplitude_lorentzian(tau, lambda, gamma, e)?;
    if n == 1 {
        return Ok(single);
    }
    if single == Complex64::new(0.0, 0.0) {
        return Ok(single);
    }
    Ok((single.ln() * n as f64).exp())
}

/// Scaling form of the survival amplitude,
/// `exp{-[1/k - (1 - e^{-k x}) / (k^2 x)] gamma t / 2}` with `k = 1 - i c`.
pub fn amplitude_scaled(t: f64, scaling: &ScalingParams) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::invalid("t", "must be nonnegative"));
    }
    let bracket = scaling_bracket(scaling.x, scaling.kappa);
    Ok((-bracket * (0.5 * scaling.gamma * t)).exp())
}
