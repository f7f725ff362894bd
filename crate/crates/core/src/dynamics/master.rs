use super::drive::DriveHamiltonian;
use super::superop::lindblad_rhs;
use crate::error::{Error, Result};
use crate::state::DensityMatrix;

/// `dt * max(|rabi|, |delta_eg|, rate) <= 0.1`
pub fn master_step_guard(h_s: &DriveHamiltonian, rate: f64, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let scale = h_s.max_frequency().max(rate.abs());
    if dt * scale > 0.1 {
        return Err(Error::StepGuard(format!(
            "dt * max(rabi, delta_eg, rate) = {} exceeds 0.1",
            dt * scale
        )));
    }
    Ok(())
}

/// Classical RK4 integration of the effective master equation. Returns the
/// state at `k dt` for `k = 0..=round(t_final / dt)`.
pub fn master_evolve(
    rho0: &DensityMatrix,
    h_s: &DriveHamiltonian,
    rate: f64,
    t_final: f64,
    dt: f64,
) -> Result<Vec<DensityMatrix>> {
    master_step_guard(h_s, rate, dt)?;
    if !(t_final >= 0.0) {
        return Err(Error::invalid("t_final", "must be nonnegative"));
    }
    let steps = (t_final / dt).round() as usize;
    let f = |r: &DensityMatrix| DensityMatrix::from_mat2_hermitian_part(&lindblad_rhs(r, h_s, rate));
    let mut out = Vec::with_capacity(steps + 1);
    let mut rho = *rho0;
    out.push(rho);
    for _ in 0..steps {
        let k1 = f(&rho);
        let k2 = f(&rho.lin_comb(1.0, &k1, 0.5 * dt));
        let k3 = f(&rho.lin_comb(1.0, &k2, 0.5 * dt));
        let k4 = f(&rho.lin_comb(1.0, &k3, dt));
        let incr = k1.lin_comb(1.0, &k2, 2.0).lin_comb(1.0, &k3, 2.0).lin_comb(1.0, &k4, 1.0);
        rho = rho.lin_comb(1.0, &incr, dt / 6.0);
        out.push(rho);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn ground_state_is_fixed_point() {
        let h = DriveHamiltonian::new(0.0, 0.0);
        let out = master_evolve(&DensityMatrix::ground(), &h, 0.8, 20.0, 0.01).unwrap();
        for r in &out {
            assert!((r.rho_ee).abs() < 1e-12 && (r.rho_gg - 1.0).abs() < 1e-12);
            assert!(r.rho_eg.norm() < 1e-12);
        }
    }

    #[test]
    fn exponential_decay_without_drive() {
        // rho_ee(t) = rho_ee(0) e^{-rate t}
        let (rate, dt) = (1.0, 1e-3);
        let h = DriveHamiltonian::new(0.0, 0.0);
        let rho0 = DensityMatrix::new(0.8, 0.2, Complex64::new(0.1, 0.3)).unwrap();
        let out = master_evolve(&rho0, &h, rate, 5.0, dt).unwrap();
        for (k, r) in out.iter().enumerate() {
            let expect = 0.8 * (-rate * k as f64 * dt).exp();
            assert!((r.rho_ee - expect).abs() <= 1e-6 * expect);
            // coherence decays at half the rate
            let coh = Complex64::new(0.1, 0.3) * (-0.5 * rate * k as f64 * dt).exp();
            assert!((r.rho_eg - coh).norm() < 1e-9);
        }
    }

    #[test]
    fn resonant_rabi_oscillation() {
        let (rabi, dt) = (0.3, 1e-2);
        let h = DriveHamiltonian::new(0.0, rabi);
        let out = master_evolve(&DensityMatrix::ground(), &h, 0.0, 40.0, dt).unwrap();
        let worst = out
            .iter()
            .enumerate()
            .map(|(k, r)| (r.rho_ee - (rabi * k as f64 * dt).sin().powi(2)).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-6, "{worst}");
    }

    #[test]
    fn trace_and_positivity_preserved() {
        let h = DriveHamiltonian::new(0.5, 0.4);
        let out = master_evolve(&DensityMatrix::excited(), &h, 0.6, 50.0, 0.01).unwrap();
        for (k, r) in out.iter().enumerate() {
            let t = k as f64 * 0.01;
            assert!((r.trace() - 1.0).abs() <= 1e-9 * t.max(1.0));
            assert!(r.min_eigenvalue() >= -1e-9);
        }
    }

    #[test]
    fn step_guard() {
        let h = DriveHamiltonian::new(0.0, 1.0);
        assert!(matches!(
            master_evolve(&DensityMatrix::ground(), &h, 0.0, 1.0, 0.2),
            Err(Error::StepGuard(_))
        ));
    }
}
