//! Two-level states: normalized kets for jump trajectories and 2x2
//! density matrices for master/diffusive evolution.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, ONE, ZERO};

/// Normalized ket `alpha|e> + beta|g>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState {
    alpha: Complex64,
    beta: Complex64,
}

impl PureState {
    /// Normalizes `(alpha, beta)`; fails on the zero vector.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::invalid("state", "amplitudes must have finite nonzero norm"));
        }
        Ok(PureState {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    pub fn excited() -> Self {
        PureState { alpha: ONE, beta: ZERO }
    }

    pub fn ground() -> Self {
        PureState { alpha: ZERO, beta: ONE }
    }

    /// `sqrt(p)|e> + sqrt(1-p) e^{i phase}|g>`
    pub fn from_population(p_excited: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_excited) {
            return Err(Error::invalid("p_excited", "must lie in [0, 1]"));
        }
        PureState::new(
            Complex64::new(p_excited.sqrt(), 0.0),
            Complex64::from_polar((1.0 - p_excited).sqrt(), phase),
        )
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn excited_population(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }

    /// `|<self|other>|^2`
    pub fn fidelity(&self, other: &PureState) -> f64 {
        (self.alpha.conj() * other.alpha + self.beta.conj() * other.beta).norm_sqr()
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix {
            rho_ee: self.alpha.norm_sqr(),
            rho_gg: self.beta.norm_sqr(),
            rho_eg: self.alpha * self.beta.conj(),
        }
    }

    pub(crate) fn as_vec(&self) -> [Complex64; 2] {
        [self.alpha, self.beta]
    }
}

/// Hermitian 2x2 density matrix stored by its independent entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    pub rho_ee: f64,
    pub rho_gg: f64,
    pub rho_eg: Complex64,
}

impl DensityMatrix {
    pub fn excited() -> Self {
        DensityMatrix { rho_ee: 1.0, rho_gg: 0.0, rho_eg: ZERO }
    }

    pub fn ground() -> Self {
        DensityMatrix { rho_ee: 0.0, rho_gg: 1.0, rho_eg: ZERO }
    }

    /// Validates trace, Hermiticity is structural, and positivity to 1e-9.
    pub fn new(rho_ee: f64, rho_gg: f64, rho_eg: Complex64) -> Result<Self> {
        let rho = DensityMatrix { rho_ee, rho_gg, rho_eg };
        if ((rho_ee + rho_gg) - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("rho", format!("trace {} != 1", rho_ee + rho_gg)));
        }
        if rho.min_eigenvalue() < -1e-9 {
            return Err(Error::invalid("rho", "not positive semidefinite"));
        }
        Ok(rho)
    }

    /// Hermitian part of `m`, without trace or positivity repair.
    pub fn from_mat2_hermitian_part(m: &Mat2) -> Self {
        DensityMatrix {
            rho_ee: m.get(0, 0).re,
            rho_gg: m.get(1, 1).re,
            rho_eg: (m.get(0, 1) + m.get(1, 0).conj()) * 0.5,
        }
    }

    pub fn to_mat2(&self) -> Mat2 {
        Mat2::new(
            Complex64::new(self.rho_ee, 0.0),
            self.rho_eg,
            self.rho_eg.conj(),
            Complex64::new(self.rho_gg, 0.0),
        )
    }

    pub fn trace(&self) -> f64 {
        self.rho_ee + self.rho_gg
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.rho_ee + self.rho_gg);
        let half = 0.5 * (self.rho_ee - self.rho_gg);
        let r = (half * half + self.rho_eg.norm_sqr()).sqrt();
        (mean - r, mean + r)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().0
    }

    /// `Tr(op rho)`
    pub fn expect(&self, op: &Mat2) -> Complex64 {
        (*op * self.to_mat2()).trace()
    }

    /// Bloch vector `(<sx>, <sy>, <sz>)`.
    pub fn bloch(&self) -> [f64; 3] {
        [
            2.0 * self.rho_eg.re,
            -2.0 * self.rho_eg.im,
            self.rho_ee - self.rho_gg,
        ]
    }

    /// Linear combination `a*self + b*other`, used for ensemble means.
    pub fn lin_comb(&self, a: f64, other: &DensityMatrix, b: f64) -> DensityMatrix {
        DensityMatrix {
            rho_ee: a * self.rho_ee + b * other.rho_ee,
            rho_gg: a * self.rho_gg + b * other.rho_gg,
            rho_eg: self.rho_eg * a + other.rho_eg * b,
        }
    }
}
