//! Local polarization in the σ⁺/π/σ⁻ basis of a quantization axis.
//!
//! Overlaps are `ξ_j = |<e_j, u>|²` for the unit polarization vector
//! `u = E / |E|`. The spin (ellipticity) vector is `s = Im(u* × u)`, which
//! equals `+n` for `u = e_σ+` and the quantization axis `n`; the
//! `i (u* × u)` convention differs only by a global sign.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fibermode::{FiberSpec, GuidedMode, ModeId, ModeSolution};
use crate::grid::{FieldMap, GridSpec};
use crate::real::Real;
use crate::vector::FieldVector;

const UNIT_TOL: f64 = 1e-9;

/// Dipole / photon polarization channel relative to the quantization axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    SigmaPlus,
    Pi,
    SigmaMinus,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::SigmaPlus, Channel::Pi, Channel::SigmaMinus];

    /// Spherical index `q`: +1, 0, −1.
    pub fn q(self) -> i32 {
        match self {
            Channel::SigmaPlus => 1,
            Channel::Pi => 0,
            Channel::SigmaMinus => -1,
        }
    }

    pub fn from_q(q: i32) -> Option<Self> {
        match q {
            1 => Some(Channel::SigmaPlus),
            0 => Some(Channel::Pi),
            -1 => Some(Channel::SigmaMinus),
            _ => None,
        }
    }

    /// σ⁺ ↔ σ⁻; π unchanged.
    pub fn mirrored(self) -> Self {
        Channel::from_q(-self.q()).unwrap()
    }
}

/// Orthonormal complex basis `(e_π, e_σ+, e_σ−)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizationFrame<T> {
    pub e_pi: FieldVector<T>,
    pub e_sigma_plus: FieldVector<T>,
    pub e_sigma_minus: FieldVector<T>,
}

impl<T: Real> Default for QuantizationFrame<T> {
    /// Quantization axis `+y`: `e_π = e_y`, `e_σ± = ±(e_x ∓ i e_z)/√2`.
    fn default() -> Self {
        Self::along_axis([T::zero(), T::one(), T::zero()]).expect("unit axis")
    }
}

impl<T: Real> QuantizationFrame<T> {
    /// Frame for quantization axis `n` (normalized internally). With a
    /// right-handed triad `(t1, t2, n)`, `e_σ± = −i (t1 ± i t2)/√2`; for
    /// `n = e_y` this reproduces `±(e_x ∓ i e_z)/√2`.
    pub fn along_axis(axis: [T; 3]) -> Result<Self> {
        let len = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !(len > T::zero() && len.is_finite()) {
            return Err(Error::InvalidFrame("quantization axis must be a nonzero finite vector".into()));
        }
        let n = [axis[0] / len, axis[1] / len, axis[2] / len];
        let reference =
            if n[2].abs() > T::lit(0.9) { [T::one(), T::zero(), T::zero()] } else { [T::zero(), T::zero(), T::one()] };
        let proj = reference[0] * n[0] + reference[1] * n[1] + reference[2] * n[2];
        let t1 = [reference[0] - proj * n[0], reference[1] - proj * n[1], reference[2] - proj * n[2]];
        let t1_len = (t1[0] * t1[0] + t1[1] * t1[1] + t1[2] * t1[2]).sqrt();
        let t1 = [t1[0] / t1_len, t1[1] / t1_len, t1[2] / t1_len];
        let t2 = [n[1] * t1[2] - n[2] * t1[1], n[2] * t1[0] - n[0] * t1[2], n[0] * t1[1] - n[1] * t1[0]];

        let norm = T::FRAC_1_SQRT_2();
        let make = |sign: T| {
            let c = |i: usize| Complex::new(t2[i] * sign * norm, -t1[i] * norm);
            FieldVector::new(c(0), c(1), c(2))
        };
        Ok(Self {
            e_pi: FieldVector::real(n[0], n[1], n[2]),
            e_sigma_plus: make(T::one()),
            e_sigma_minus: make(-T::one()),
        })
    }

    /// Frame from explicit basis vectors, checked for orthonormality.
    pub fn from_vectors(
        e_pi: FieldVector<T>,
        e_sigma_plus: FieldVector<T>,
        e_sigma_minus: FieldVector<T>,
    ) -> Result<Self> {
        let frame = Self { e_pi, e_sigma_plus, e_sigma_minus };
        let tol = T::lit(UNIT_TOL);
        let basis = frame.vectors();
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let g = a.inner(b);
                let target = if i == j { T::one() } else { T::zero() };
                if (g - Complex::new(target, T::zero())).norm() > tol {
                    return Err(Error::InvalidFrame(format!("basis vectors {i} and {j} not orthonormal")));
                }
            }
        }
        Ok(frame)
    }

    pub fn vectors(&self) -> [FieldVector<T>; 3] {
        [self.e_sigma_plus, self.e_pi, self.e_sigma_minus]
    }

    pub fn basis(&self, channel: Channel) -> &FieldVector<T> {
        match channel {
            Channel::SigmaPlus => &self.e_sigma_plus,
            Channel::Pi => &self.e_pi,
            Channel::SigmaMinus => &self.e_sigma_minus,
        }
    }

    /// Quantization axis (real part of `e_π`).
    pub fn axis(&self) -> [T; 3] {
        [self.e_pi.ex.re, self.e_pi.ey.re, self.e_pi.ez.re]
    }
}

/// Squared projections of a unit polarization vector on the frame basis.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PolarizationOverlap<T> {
    pub xi_sigma_plus: T,
    pub xi_pi: T,
    pub xi_sigma_minus: T,
}

impl<T: Real> PolarizationOverlap<T> {
    pub fn get(&self, channel: Channel) -> T {
        match channel {
            Channel::SigmaPlus => self.xi_sigma_plus,
            Channel::Pi => self.xi_pi,
            Channel::SigmaMinus => self.xi_sigma_minus,
        }
    }

    pub fn sum(&self) -> T {
        self.xi_sigma_plus + self.xi_pi + self.xi_sigma_minus
    }
}

/// `Im(u* × u)` for a unit polarization vector.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpinDensityVector<T> {
    pub sx: T,
    pub sy: T,
    pub sz: T,
}

impl<T: Real> SpinDensityVector<T> {
    pub fn norm(&self) -> T {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }
}

/// Intensity, overlaps and spin at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LocalPolarization<T> {
    pub intensity: T,
    pub overlap: PolarizationOverlap<T>,
    pub spin: SpinDensityVector<T>,
}

/// `u = E / |E|`.
pub fn unit_polarization<T: Real>(field: &FieldVector<T>) -> Result<FieldVector<T>> {
    let n = field.norm();
    if !(n > T::zero()) || !n.is_finite() {
        return Err(Error::ZeroField);
    }
    Ok(*field * (T::one() / n))
}

fn check_unit<T: Real>(u: &FieldVector<T>) -> Result<()> {
    let n = u.norm();
    if !((n - T::one()).abs() <= T::lit(UNIT_TOL)) {
        return Err(Error::NonUnitVector(n.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// `ξ_j = |<e_j, u>|²` for each basis vector of `frame`.
pub fn overlaps<T: Real>(u: &FieldVector<T>, frame: &QuantizationFrame<T>) -> Result<PolarizationOverlap<T>> {
    check_unit(u)?;
    Ok(PolarizationOverlap {
        xi_sigma_plus: frame.e_sigma_plus.inner(u).norm_sqr(),
        xi_pi: frame.e_pi.inner(u).norm_sqr(),
        xi_sigma_minus: frame.e_sigma_minus.inner(u).norm_sqr(),
    })
}

/// Spin (ellipticity) vector `Im(u* × u)`.
pub fn spin_density<T: Real>(u: &FieldVector<T>) -> Result<SpinDensityVector<T>> {
    check_unit(u)?;
    let c = u.conj().cross(u);
    Ok(SpinDensityVector { sx: c.ex.im, sy: c.ey.im, sz: c.ez.im })
}

/// Intensity `|E|²`, overlaps and spin of a field at one point.
pub fn local_polarization<T: Real>(
    field: &FieldVector<T>,
    frame: &QuantizationFrame<T>,
) -> Result<LocalPolarization<T>> {
    let u = unit_polarization(field)?;
    Ok(LocalPolarization { intensity: field.norm_sqr(), overlap: overlaps(&u, frame)?, spin: spin_density(&u)? })
}

/// Per-node intensity, overlaps and spin of basis mode `id`. Nodes exactly on
/// the fiber surface take the cladding-side limit.
pub fn polarization_map<T: Real>(
    spec: &FiberSpec<T>,
    sol: &ModeSolution<T>,
    id: ModeId,
    frame: &QuantizationFrame<T>,
    grid: &GridSpec<T>,
) -> Result<FieldMap<T, LocalPolarization<T>>> {
    grid.validate()?;
    let mode = GuidedMode::new(spec, sol)?;
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (x, y) = grid.node(i);
            local_polarization(&mode.field(id, x, y), frame)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldMap { grid: *grid, values })
}

/// Per-node overlaps `ξ_σ+, ξ_π, ξ_σ−` of basis mode `id`.
pub fn overlap_map<T: Real>(
    spec: &FiberSpec<T>,
    sol: &ModeSolution<T>,
    id: ModeId,
    frame: &QuantizationFrame<T>,
    grid: &GridSpec<T>,
) -> Result<FieldMap<T, PolarizationOverlap<T>>> {
    let full = polarization_map(spec, sol, id, frame, grid)?;
    Ok(FieldMap { grid: full.grid, values: full.values.into_iter().map(|p| p.overlap).collect() })
}
