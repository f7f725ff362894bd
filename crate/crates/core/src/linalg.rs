//! Minimal 2x2 complex matrix algebra in the {|e>, |g>} basis.
//!
//! Index 0 is the excited state, index 1 the ground state, so
//! `sigma_z = diag(1, -1)` and `sigma_minus = |g><e|` has its single
//! nonzero entry at (1, 0).

use std::ops::{Add, AddAssign, Mul, Sub};

use num_complex::Complex64;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Mat2([[m00, m01], [m10, m11]])
    }

    pub const fn zero() -> Self {
        Mat2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    pub const fn sigma_x() -> Self {
        Mat2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub const fn sigma_y() -> Self {
        Mat2([[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]])
    }

    pub const fn sigma_z() -> Self {
        Mat2([[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]])
    }

    /// |g><e|
    pub const fn sigma_minus() -> Self {
        Mat2([[ZERO, ZERO], [ONE, ZERO]])
    }

    /// |e><g|
    pub const fn sigma_plus() -> Self {
        Mat2([[ZERO, ONE], [ZERO, ZERO]])
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    pub fn dagger(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn commutator(&self, other: &Mat2) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Mat2) -> Self {
        *self * *other + *other * *self
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        (*self - self.dagger()).max_abs()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, rhs: Mat2) {
        *self = *self + rhs;
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] - b[0][0], a[0][1] - b[0][1]],
            [a[1][0] - b[1][0], a[1][1] - b[1][1]],
        ])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (Mat2::sigma_x(), Mat2::sigma_y(), Mat2::sigma_z());
        assert_eq!(x * x, Mat2::identity());
        assert_eq!(x * y, z.scale(I));
        assert_eq!(Mat2::sigma_minus() + Mat2::sigma_plus(), x);
        assert_eq!(Mat2::sigma_minus().dagger(), Mat2::sigma_plus());
        // sigma+ sigma- projects on |e>
        let pe = Mat2::sigma_plus() * Mat2::sigma_minus();
        assert_eq!(pe, Mat2::new(ONE, ZERO, ZERO, ZERO));
    }

    #[test]
    fn lowering_maps_excited_to_ground() {
        let v = Mat2::sigma_minus().apply([ONE, ZERO]);
        assert_eq!(v, [ZERO, ONE]);
    }
}
