use num_complex::Complex64;

use super::drive::DriveHamiltonian;
use crate::linalg::{Mat2, I};
use crate::state::DensityMatrix;

/// `D[sigma-] rho = s rho s^dag - {s^dag s, rho} / 2` with `s = sigma-`.
pub fn dissipator(rho: &DensityMatrix) -> Mat2 {
    let s = Mat2::sigma_minus();
    let sd = s.dagger();
    let r = rho.to_mat2();
    s * r * sd - (sd * s).anticommutator(&r).scale_re(0.5)
}

/// `H[c] rho = c rho + rho c^dag - Tr(c rho + rho c^dag) rho` with
/// `c = e^{-i phi} sigma-`.
pub fn measurement_superop(rho: &DensityMatrix, phi: f64) -> Mat2 {
    let c = Mat2::sigma_minus().scale(Complex64::from_polar(1.0, -phi));
    let r = rho.to_mat2();
    let m = c * r + r * c.dagger();
    m - r.scale(m.trace())
}

/// `-i [H_S, rho] + rate D[sigma-] rho`
pub fn lindblad_rhs(rho: &DensityMatrix, h_s: &DriveHamiltonian, rate: f64) -> Mat2 {
    let r = rho.to_mat2();
    h_s.matrix().commutator(&r).scale(-I) + dissipator(rho).scale_re(rate)
}
