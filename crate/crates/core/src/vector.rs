use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::real::Real;

/// Complex Cartesian 3-vector: a field amplitude at a point. `z` is the
/// fiber axis; `y` is the default quantization axis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FieldVector<T> {
    pub ex: Complex<T>,
    pub ey: Complex<T>,
    pub ez: Complex<T>,
}

impl<T: Real> FieldVector<T> {
    pub fn new(ex: Complex<T>, ey: Complex<T>, ez: Complex<T>) -> Self {
        Self { ex, ey, ez }
    }

    pub fn real(x: T, y: T, z: T) -> Self {
        Self::new(Complex::new(x, T::zero()), Complex::new(y, T::zero()), Complex::new(z, T::zero()))
    }

    pub fn zero() -> Self {
        Self::real(T::zero(), T::zero(), T::zero())
    }

    pub fn components(&self) -> [Complex<T>; 3] {
        [self.ex, self.ey, self.ez]
    }

    /// `|E|^2`.
    pub fn norm_sqr(&self) -> T {
        self.ex.norm_sqr() + self.ey.norm_sqr() + self.ez.norm_sqr()
    }

    pub fn norm(&self) -> T {
        // scaled to avoid overflow for large amplitudes
        let m = self.components().iter().fold(T::zero(), |acc, c| acc.max(c.re.abs()).max(c.im.abs()));
        if m == T::zero() {
            return T::zero();
        }
        (*self * (T::one() / m)).norm_sqr().sqrt() * m
    }

    /// Hermitian inner product `<self, other> = self^* . other`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.ex.conj() * other.ex + self.ey.conj() * other.ey + self.ez.conj() * other.ez
    }

    pub fn conj(&self) -> Self {
        Self::new(self.ex.conj(), self.ey.conj(), self.ez.conj())
    }

    pub fn cross(&self, o: &Self) -> Self {
        Self::new(self.ey * o.ez - self.ez * o.ey, self.ez * o.ex - self.ex * o.ez, self.ex * o.ey - self.ey * o.ex)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.ex * c, self.ey * c, self.ez * c)
    }

    pub fn is_finite(&self) -> bool {
        self.components().iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Builds a Cartesian vector from cylindrical components at azimuth `phi`.
    pub fn from_cylindrical(e_r: Complex<T>, e_phi: Complex<T>, e_z: Complex<T>, phi: T) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(e_r * c - e_phi * s, e_r * s + e_phi * c, e_z)
    }

    /// `(e_r, e_phi, e_z)` at azimuth `phi`.
    pub fn to_cylindrical(&self, phi: T) -> [Complex<T>; 3] {
        let (s, c) = phi.sin_cos();
        [self.ex * c + self.ey * s, -self.ex * s + self.ey * c, self.ez]
    }
}

impl<T: Real> Add for FieldVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.ex + o.ex, self.ey + o.ey, self.ez + o.ez)
    }
}

impl<T: Real> Sub for FieldVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.ex - o.ex, self.ey - o.ey, self.ez - o.ez)
    }
}

impl<T: Real> Neg for FieldVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.ex, -self.ey, -self.ez)
    }
}

impl<T: Real> Mul<T> for FieldVector<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self::new(self.ex * k, self.ey * k, self.ez * k)
    }
}
