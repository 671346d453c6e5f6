//! Plane-wave scattering by a dielectric cylinder at normal incidence.
//!
//! The incident wave travels along `+y` with Jones vector `(E0x, E0z)` and
//! unit amplitude. It is split into a TM part (`E_z`) and a TE part (`H_z`)
//! and each is expanded as `Σ_n Z_n(k r) e^{i n φ}`. Per order the outside
//! field is `J_n + c_n H_n^(1)` and the inside field `d_n J_n(m k r)`, with
//! `m = n_cyl / n_med`. Continuity of the tangential fields fixes
//!
//! ```text
//! TM:  J_n(x) + c_n H_n(x)  = d_n J_n(mx)    J_n'(x) + c_n H_n'(x) = m d_n J_n'(mx)
//! TE:  J_n(x) + e_n H_n(x)  = f_n J_n(mx)    J_n'(x) + e_n H_n'(x) = f_n J_n'(mx) / m
//! ```
//!
//! with `x = k a`. The coefficients are even in `n`. Magnetic fields are
//! returned as `Z0 H`, so both fields share units.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibermode::{sellmeier_silica, Side, DEFAULT_RADIUS_NM, DEFAULT_WAVELENGTH_NM};
use crate::grid::{FieldMap, GridSpec};
use crate::polarization::{local_polarization, LocalPolarization, QuantizationFrame};
use crate::real::Real;
use crate::specfun::{j_table, signed_order, y_table};
use crate::vector::FieldVector;

const TAIL_TOL: f64 = 1e-12;
const EXTRA_ORDERS: usize = 8;
const MAX_EXTRA_ORDERS: usize = 400;

/// Incident polarization in the `(x, z)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JonesVector<T> {
    pub x: Complex<T>,
    pub z: Complex<T>,
}

impl<T: Real> JonesVector<T> {
    pub fn new(x: Complex<T>, z: Complex<T>) -> Self {
        Self { x, z }
    }

    /// `e_σ− = −(x̂ + i ẑ)/√2` for the quantization axis `+y`.
    pub fn sigma_minus() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self::new(Complex::new(-h, T::zero()), Complex::new(T::zero(), -h))
    }

    /// `e_σ+ = (x̂ − i ẑ)/√2` for the quantization axis `+y`.
    pub fn sigma_plus() -> Self {
        let h = T::FRAC_1_SQRT_2();
        Self::new(Complex::new(h, T::zero()), Complex::new(T::zero(), -h))
    }

    pub fn linear_x() -> Self {
        Self::new(Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()))
    }

    pub fn linear_z() -> Self {
        Self::new(Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero()))
    }

    pub fn norm_sqr(&self) -> T {
        self.x.norm_sqr() + self.z.norm_sqr()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterSpec<T> {
    pub cylinder_radius_nm: T,
    pub cylinder_index: T,
    pub medium_index: T,
    pub wavelength_nm: T,
    pub incident_polarization: JonesVector<T>,
}

impl<T: Real> ScatterSpec<T> {
    /// Silica cylinder (a = 250 nm) in vacuum at 852 nm, σ− incidence.
    pub fn silica_nanofiber() -> Self {
        let wl = T::lit(DEFAULT_WAVELENGTH_NM);
        Self {
            cylinder_radius_nm: T::lit(DEFAULT_RADIUS_NM),
            cylinder_index: sellmeier_silica(wl).expect("852 nm lies in the Sellmeier range"),
            medium_index: T::one(),
            wavelength_nm: wl,
            incident_polarization: JonesVector::sigma_minus(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScatterSpec(m));
        let positive = |v: T| v.is_finite() && v > T::zero();
        if !positive(self.cylinder_radius_nm) {
            return bad(format!("cylinder radius must be positive, got {}", self.cylinder_radius_nm));
        }
        if !positive(self.wavelength_nm) {
            return bad(format!("wavelength must be positive, got {}", self.wavelength_nm));
        }
        if !(self.cylinder_index.is_finite() && self.cylinder_index >= T::one()) {
            return bad(format!("cylinder index must be >= 1, got {}", self.cylinder_index));
        }
        if !(self.medium_index.is_finite() && self.medium_index >= T::one()) {
            return bad(format!("medium index must be >= 1, got {}", self.medium_index));
        }
        let n = self.incident_polarization.norm_sqr().sqrt();
        if !((n - T::one()).abs() <= T::lit(1e-9)) {
            return bad(format!("incident Jones vector must have unit norm, got {n}"));
        }
        Ok(())
    }

    /// Wavenumber in the surrounding medium.
    pub fn k_medium(&self) -> T {
        T::TAU() * self.medium_index / self.wavelength_nm
    }

    pub fn relative_index(&self) -> T {
        self.cylinder_index / self.medium_index
    }

    /// Size parameter `k a`.
    pub fn size_parameter(&self) -> T {
        self.k_medium() * self.cylinder_radius_nm
    }
}

/// Expansion coefficients for orders `0..=n_max`; negative orders follow
/// from `c_{−n} = c_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterSolution<T> {
    pub spec: ScatterSpec<T>,
    pub n_max: usize,
    /// Highest order of the inside expansion.
    pub n_interior: usize,
    /// Outside TM coefficients `c_n`.
    pub coefficients_tm: Vec<Complex<T>>,
    /// Outside TE coefficients `e_n`.
    pub coefficients_te: Vec<Complex<T>>,
    /// Inside TM coefficients `d_n`.
    pub interior_tm: Vec<Complex<T>>,
    /// Inside TE coefficients `f_n`.
    pub interior_te: Vec<Complex<T>>,
    /// Orders whose boundary system was singular; their coefficients are 0.
    pub singular_orders: Vec<usize>,
}

struct OrderCoefficients<T> {
    c: Complex<T>,
    d: Complex<T>,
    e: Complex<T>,
    f: Complex<T>,
    j_inner: T,
    h_outer: T,
    singular: bool,
}

fn solve_order<T: Real>(n: usize, x: T, m: T) -> Result<OrderCoefficients<T>> {
    let jx = j_table(n, x)?;
    let yx = y_table(n, x)?;
    let jm = j_table(n, m * x)?;
    let (j, jp) = (jx.values[n], jx.derivatives[n]);
    let h = Complex::new(j, yx.values[n]);
    let hp = Complex::new(jp, yx.derivatives[n]);
    let (jin, jinp) = (jm.values[n], jm.derivatives[n]);

    // [-H, a][c; d] = [J; J'] with a = Jin (top), b·Jin' (bottom)
    let solve = |b: T| -> Option<(Complex<T>, Complex<T>)> {
        let det = hp * jin - h * (jinp * b);
        if !(det.norm() > T::zero()) || !(det.re.is_finite() && det.im.is_finite()) {
            return None;
        }
        let c = Complex::new(jinp * b * j - jin * jp, T::zero()) / det;
        let d = (hp * j - h * jp) / det;
        Some((c, d))
    };
    let tm = solve(m);
    let te = solve(T::one() / m);
    let zero = Complex::new(T::zero(), T::zero());
    let singular = tm.is_none() || te.is_none();
    let (c, d) = tm.unwrap_or((zero, zero));
    let (e, f) = te.unwrap_or((zero, zero));
    Ok(OrderCoefficients { c, d, e, f, j_inner: jin, h_outer: h.norm().max(hp.norm()), singular })
}

/// Outside coefficients truncated at `N = ceil(k a n_cyl) + 8`, extended
/// until the last retained order is below `1e-12` of the largest, both as a
/// bare coefficient and as its surface term `|c_n H_n(k a)|`. Inside
/// coefficients run until their surface contribution `|d_n J_n(m k a)|`
/// drops below working precision.
pub fn solve_scattering<T: Real>(spec: &ScatterSpec<T>) -> Result<ScatterSolution<T>> {
    let start = (spec.size_parameter() * spec.relative_index()).ceil().to_usize().unwrap_or(0) + EXTRA_ORDERS;
    solve_from(spec, start, true)
}

/// Coefficients for exactly `n_max` outside orders (no adaptive extension).
/// The inside expansion still runs to convergence.
pub fn solve_scattering_truncated<T: Real>(spec: &ScatterSpec<T>, n_max: usize) -> Result<ScatterSolution<T>> {
    solve_from(spec, n_max, false)
}

fn solve_from<T: Real>(spec: &ScatterSpec<T>, start: usize, adaptive: bool) -> Result<ScatterSolution<T>> {
    spec.validate()?;
    let x = spec.size_parameter();
    let m = spec.relative_index();
    let mut sol = ScatterSolution {
        spec: *spec,
        n_max: 0,
        n_interior: 0,
        coefficients_tm: Vec::new(),
        coefficients_te: Vec::new(),
        interior_tm: Vec::new(),
        interior_te: Vec::new(),
        singular_orders: Vec::new(),
    };
    let tol = T::lit(TAIL_TOL);
    let inner_tol = T::epsilon() * T::lit(0.01);
    let (mut outer_done, mut inner_done) = (false, false);
    let mut surface_peak = T::zero();
    let mut n = 0usize;
    while !(outer_done && inner_done) {
        let o = solve_order(n, x, m)?;
        if o.singular {
            sol.singular_orders.push(n);
        }
        if !outer_done {
            sol.coefficients_tm.push(o.c);
            sol.coefficients_te.push(o.e);
            let surface = o.c.norm().max(o.e.norm()) * o.h_outer;
            surface_peak = surface_peak.max(surface);
            if n >= start {
                let peak =
                    sol.coefficients_tm.iter().chain(&sol.coefficients_te).fold(T::zero(), |a, c| a.max(c.norm()));
                let last = o.c.norm().max(o.e.norm());
                let converged = last <= tol * peak && surface <= tol * surface_peak;
                if !adaptive || converged || n >= start + MAX_EXTRA_ORDERS {
                    outer_done = true;
                    sol.n_max = n;
                }
            }
        }
        if !inner_done {
            sol.interior_tm.push(o.d);
            sol.interior_te.push(o.f);
            let surface = o.d.norm().max(o.f.norm()) * o.j_inner.abs();
            if n >= start && (surface <= inner_tol || n >= start + MAX_EXTRA_ORDERS) {
                inner_done = true;
                sol.n_interior = n;
            }
        }
        n += 1;
    }
    Ok(sol)
}

impl<T: Real> ScatterSolution<T> {
    fn coef(v: &[Complex<T>], n: i64) -> Complex<T> {
        v[n.unsigned_abs() as usize]
    }

    /// `c_n` for either sign of `n`.
    pub fn tm(&self, n: i64) -> Complex<T> {
        Self::coef(&self.coefficients_tm, n)
    }

    /// `e_n` for either sign of `n`.
    pub fn te(&self, n: i64) -> Complex<T> {
        Self::coef(&self.coefficients_te, n)
    }

    pub fn side_of(&self, x: T, y: T) -> Side {
        if x.hypot(y) < self.spec.cylinder_radius_nm {
            Side::Core
        } else {
            Side::Cladding
        }
    }

    /// Total `E` and `Z0 H` evaluated with the expansion of `side`. Outside,
    /// the incident wave is added in closed form to the scattered series.
    pub fn fields_on_side(&self, x: T, y: T, side: Side) -> Result<(FieldVector<T>, FieldVector<T>)> {
        let s = &self.spec;
        let k = s.k_medium();
        let n_med = s.medium_index;
        let k0 = k / n_med;
        let e0x = s.incident_polarization.x;
        let e0z = s.incident_polarization.z;
        let r = x.hypot(y).max(s.cylinder_radius_nm * T::lit(1e-12));
        let phi = y.atan2(x);
        let zero = Complex::new(T::zero(), T::zero());
        let i = Complex::new(T::zero(), T::one());

        // radial series: outside c H_n(kr), inside d J_n(mkr)
        let (nm, n_loc, rho) = match side {
            Side::Cladding => (self.n_max, n_med, k * r),
            Side::Core => (self.n_interior, s.cylinder_index, k * r * s.relative_index()),
        };
        let jt = j_table(nm, rho)?;
        let yt = match side {
            Side::Cladding => Some(y_table(nm, rho)?),
            Side::Core => None,
        };
        let (mut ez, mut er, mut ephi) = (zero, zero, zero);
        let (mut hz, mut hr, mut hphi) = (zero, zero, zero);
        let nmax = nm as i64;
        for n in -nmax..=nmax {
            let jv = signed_order(&jt.values, n);
            let jd = signed_order(&jt.derivatives, n);
            let (zv, zd, a_tm, a_te) = match &yt {
                Some(yt) => (
                    Complex::new(jv, signed_order(&yt.values, n)),
                    Complex::new(jd, signed_order(&yt.derivatives, n)),
                    self.tm(n),
                    self.te(n),
                ),
                None => (
                    Complex::new(jv, T::zero()),
                    Complex::new(jd, T::zero()),
                    Self::coef(&self.interior_tm, n),
                    Self::coef(&self.interior_te, n),
                ),
            };
            let nf = T::from_int(n);
            let (sp, cp) = (nf * phi).sin_cos();
            let ph = Complex::new(cp, sp);
            let (tm, tm_d) = (a_tm * zv * ph, a_tm * zd * ph);
            let (te, te_d) = (a_te * zv * ph, a_te * zd * ph);
            ez = ez + tm;
            hr = hr + tm * nf;
            hphi = hphi + tm_d;
            hz = hz + te;
            er = er + te * nf;
            ephi = ephi + te_d;
        }
        let m_loc = n_loc / n_med;
        // TM: E_z and Z0 H = curl E / (i k0)
        let ez = ez * e0z;
        let hr = hr * e0z / (k0 * r);
        let hphi = hphi * e0z * i * n_loc;
        // TE: Z0 H_z, E from curl H
        let hz = hz * (-e0x * n_med);
        let er = er * e0x / (k * m_loc * m_loc * r);
        let ephi = ephi * i * e0x / m_loc;
        let mut e = FieldVector::from_cylindrical(er, ephi, ez, phi);
        let mut h = FieldVector::from_cylindrical(hr, hphi, hz, phi);
        if side == Side::Cladding {
            e = e + self.incident_field(x, y);
            h = h + self.incident_magnetic(x, y);
        }
        Ok((e, h))
    }

    /// `Z0 H` of the incident wave, `n_med (E0z, 0, −E0x) e^{i k y}`.
    pub fn incident_magnetic(&self, _x: T, y: T) -> FieldVector<T> {
        let (s, c) = (self.spec.k_medium() * y).sin_cos();
        let p = Complex::new(c, s) * self.spec.medium_index;
        let j = self.spec.incident_polarization;
        FieldVector::new(j.z * p, Complex::new(T::zero(), T::zero()), -j.x * p)
    }

    /// Total electric field.
    pub fn total_field(&self, x: T, y: T) -> Result<FieldVector<T>> {
        Ok(self.fields_on_side(x, y, self.side_of(x, y))?.0)
    }

    /// Incident plane wave `(E0x, 0, E0z) e^{i k y}`.
    pub fn incident_field(&self, _x: T, y: T) -> FieldVector<T> {
        let (s, c) = (self.spec.k_medium() * y).sin_cos();
        let p = Complex::new(c, s);
        let j = self.spec.incident_polarization;
        FieldVector::new(j.x * p, Complex::new(T::zero(), T::zero()), j.z * p)
    }

    /// Scattered field outside the cylinder, `E − E_inc`.
    pub fn scattered_field(&self, x: T, y: T) -> Result<FieldVector<T>> {
        Ok(self.fields_on_side(x, y, Side::Cladding)?.0 - self.incident_field(x, y))
    }
}

/// Total electric field at `point` (nm).
pub fn total_field<T: Real>(sol: &ScatterSolution<T>, point: (T, T)) -> Result<FieldVector<T>> {
    sol.total_field(point.0, point.1)
}

/// Intensity (relative to the incident wave), overlaps and spin of the total
/// field on every grid node.
pub fn scatter_map<T: Real>(
    sol: &ScatterSolution<T>,
    grid: &GridSpec<T>,
    frame: &QuantizationFrame<T>,
) -> Result<FieldMap<T, LocalPolarization<T>>> {
    grid.validate()?;
    let scale = T::one() / sol.spec.incident_polarization.norm_sqr();
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (x, y) = grid.node(idx);
            let mut lp = local_polarization(&sol.total_field(x, y)?, frame)?;
            lp.intensity = lp.intensity * scale;
            Ok(lp)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldMap { grid: *grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_order_for_default_cylinder() {
        let sol = solve_scattering(&ScatterSpec::<f64>::silica_nanofiber()).unwrap();
        assert_eq!(sol.n_max, 16);
        let peak = sol.coefficients_tm.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(sol.coefficients_tm[sol.n_max].norm() < 1e-12 * peak);
        assert!(sol.singular_orders.is_empty());
    }

    #[test]
    fn matched_index_gives_no_scattering() {
        let mut spec = ScatterSpec::<f64>::silica_nanofiber();
        spec.cylinder_index = 1.0;
        let sol = solve_scattering(&spec).unwrap();
        assert!(sol.coefficients_tm.iter().chain(&sol.coefficients_te).all(|c| c.norm() == 0.0));
        let e = sol.total_field(0.0, 300.0).unwrap();
        assert!((e - sol.incident_field(0.0, 300.0)).norm() < 1e-12);
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut s = ScatterSpec::<f64>::silica_nanofiber();
        s.cylinder_index = 0.5;
        assert!(matches!(solve_scattering(&s), Err(Error::InvalidScatterSpec(_))));
        let mut s = ScatterSpec::<f64>::silica_nanofiber();
        s.incident_polarization = JonesVector::new(Complex::new(1.0, 0.0), Complex::new(1.0, 0.0));
        assert!(solve_scattering(&s).is_err());
        let mut s = ScatterSpec::<f64>::silica_nanofiber();
        s.cylinder_radius_nm = -1.0;
        assert!(solve_scattering(&s).is_err());
    }

    #[test]
    fn axis_is_regular() {
        let sol = solve_scattering(&ScatterSpec::<f64>::silica_nanofiber()).unwrap();
        let at0 = sol.total_field(0.0, 0.0).unwrap();
        let near = sol.total_field(1e-3, 0.0).unwrap();
        assert!(at0.is_finite());
        assert!((at0 - near).norm() < 1e-5);
    }
}
