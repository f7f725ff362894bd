use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::PureState;

/// Short-time expansion parameters: `K = sum_r V_r^2`, interval `tau`, count `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenoParams {
    pub k_coupling: f64,
    pub tau: f64,
    pub n: u64,
}

impl ZenoParams {
    pub fn new(k_coupling: f64, tau: f64, n: u64) -> Result<Self> {
        if !(k_coupling >= 0.0 && k_coupling.is_finite()) {
            return Err(Error::invalid("k_coupling", "must be nonnegative"));
        }
        if !(tau > 0.0) {
            return Err(Error::invalid("tau", "must be positive"));
        }
        Ok(ZenoParams { k_coupling, tau, n })
    }

    /// `n = round(t / tau)` measurements spanning `t`.
    pub fn spanning(k_coupling: f64, t: f64, tau: f64) -> Result<Self> {
        if !(t >= 0.0) {
            return Err(Error::invalid("t", "must be nonnegative"));
        }
        Self::new(k_coupling, tau, (t / tau).round() as u64)
    }

    fn k_tau_sq(&self) -> f64 {
        self.k_coupling * self.tau * self.tau
    }
}

/// Excited-amplitude factor `(1 - K tau^2)^n` retained after `n` projections.
pub fn zeno_retention(params: &ZenoParams) -> f64 {
    (params.n as f64 * (-params.k_tau_sq()).ln_1p()).exp()
}

/// State after `n` null-result projections of the second-order short-time
/// evolution: `alpha0 (1 - K tau^2)^n |e> + beta0 |g>`, renormalized.
///
/// The expansion is only meaningful for `K tau^2` well below one; a warning
/// is logged from `K tau^2 >= 0.01`.
pub fn zeno_sequence(params: &ZenoParams, alpha0: Complex64, beta0: Complex64) -> Result<PureState> {
    let kt2 = params.k_tau_sq();
    if kt2 >= 1.0 {
        return Err(Error::invalid("tau", format!("K tau^2 = {kt2} >= 1")));
    }
    if kt2 >= 0.01 {
        log::warn!("K tau^2 = {kt2} is outside the short-time expansion (< 0.01)");
    }
    PureState::new(alpha0 * zeno_retention(params), beta0)
}

/// `|<Psi_n|Psi_0>|^2` for the normalized initial state `(alpha0, beta0)`.
pub fn zeno_fidelity(params: &ZenoParams, alpha0: Complex64, beta0: Complex64) -> Result<f64> {
    let initial = PureState::new(alpha0, beta0)?;
    let evolved = zeno_sequence(params, initial.alpha(), initial.beta())?;
    Ok(initial.fidelity(&evolved))
}
