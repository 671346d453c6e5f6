//! Fundamental HE11 mode of a step-index fiber with a homogeneous cladding.
//!
//! The propagation constant is the largest root of the exact hybrid-mode
//! characteristic equation for azimuthal order 1,
//!
//! ```text
//! (J'/uJ + K'/wK) (n1² J'/uJ + n2² K'/wK) = (β/k)² (1/u² + 1/w²)²
//! ```
//!
//! with `u = h a`, `w = q a`. Fields are the quasi-circular profiles
//! `(e_r, e_φ, e_z)`, `(h_r, h_φ, h_z)` combined into the four
//! quasi-linearly polarized basis modes. Lengths are in nm, wavenumbers in
//! rad/nm, E in V/m and H in A/m for a mode carrying 1 W.
//!
//! Only HE11 is solved; for thick (multimode) fibers higher modes are
//! ignored.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{FieldMap, GridSpec};
use crate::quad;
use crate::real::Real;
use crate::specfun::{j_table, k_table};
use crate::vector::FieldVector;

/// Free-space impedance `Z0` in ohms.
pub const VACUUM_IMPEDANCE_OHM: f64 = 376.730_313_668;
/// Nominal nanofiber radius.
pub const DEFAULT_RADIUS_NM: f64 = 250.0;
/// Cs D2 line.
pub const DEFAULT_WAVELENGTH_NM: f64 = 852.0;
/// Distance of the trap minima from the fiber surface.
pub const TRAP_SURFACE_DISTANCE_NM: f64 = 230.0;

const SCAN_POINTS: usize = 2000;
const SURFACE_SAMPLES: usize = 720;

/// Geometry and materials of a step-index fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec<T> {
    pub radius_nm: T,
    pub wavelength_nm: T,
    pub n_core: T,
    pub n_clad: T,
}

impl<T: Real> FiberSpec<T> {
    pub fn new(radius_nm: T, wavelength_nm: T, n_core: T, n_clad: T) -> Result<Self> {
        let spec = Self { radius_nm, wavelength_nm, n_core, n_clad };
        spec.validate()?;
        Ok(spec)
    }

    /// Vacuum-clad silica fiber of radius 250 nm at 852 nm, core index from
    /// the fused-silica Sellmeier formula.
    pub fn silica_nanofiber() -> Self {
        let lambda = T::lit(DEFAULT_WAVELENGTH_NM);
        Self {
            radius_nm: T::lit(DEFAULT_RADIUS_NM),
            wavelength_nm: lambda,
            n_core: sellmeier_silica(lambda).expect("852 nm is inside the Sellmeier range"),
            n_clad: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.radius_nm, self.wavelength_nm, self.n_core, self.n_clad].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidSpec("non-finite parameter".into()));
        }
        if self.radius_nm <= T::zero() {
            return Err(Error::InvalidSpec(format!("radius must be positive, got {}", self.radius_nm)));
        }
        if self.wavelength_nm <= T::zero() {
            return Err(Error::InvalidSpec(format!("wavelength must be positive, got {}", self.wavelength_nm)));
        }
        if self.n_clad < T::one() {
            return Err(Error::InvalidSpec(format!("cladding index must be >= 1, got {}", self.n_clad)));
        }
        if self.n_core <= self.n_clad {
            return Err(Error::InvalidSpec(format!(
                "core index {} must exceed cladding index {}",
                self.n_core, self.n_clad
            )));
        }
        Ok(())
    }

    /// Vacuum wavenumber in rad/nm.
    pub fn k0(&self) -> T {
        T::TAU() / self.wavelength_nm
    }

    /// `V = k a sqrt(n_core² - n_clad²)`; single-mode below 2.405.
    pub fn v_number(&self) -> T {
        self.k0() * self.radius_nm * (self.n_core * self.n_core - self.n_clad * self.n_clad).sqrt()
    }

    /// `|x|` of the trap minima on the `y = 0` line.
    pub fn trap_site_x(&self) -> T {
        self.radius_nm + T::lit(TRAP_SURFACE_DISTANCE_NM)
    }
}

/// Fused-silica refractive index from the three-term Sellmeier formula
/// (Malitson coefficients), valid from 210 nm to 3.71 µm.
pub fn sellmeier_silica<T: Real>(wavelength_nm: T) -> Result<T> {
    const B: [f64; 3] = [0.696_166_3, 0.407_942_6, 0.897_479_4];
    const C: [f64; 3] = [0.068_404_3, 0.116_241_4, 9.896_161];
    if !(wavelength_nm >= T::lit(210.0) && wavelength_nm <= T::lit(3710.0)) {
        return Err(Error::Domain(format!("Sellmeier range is 210..=3710 nm, got {wavelength_nm}")));
    }
    let l2 = (wavelength_nm / T::lit(1000.0)).powi(2);
    let sum = B.iter().zip(C.iter()).fold(T::zero(), |acc, (&b, &c)| {
        let c = T::lit(c);
        acc + T::lit(b) * l2 / (l2 - c * c)
    });
    Ok((T::one() + sum).sqrt())
}

/// Main transverse polarization of a quasi-linear basis mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MainPolarization {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
}

/// Propagation direction along the fiber axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "+z")]
    PlusZ,
    #[serde(rename = "-z")]
    MinusZ,
}

impl Direction {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Direction::PlusZ => T::one(),
            Direction::MinusZ => -T::one(),
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::PlusZ => Direction::MinusZ,
            Direction::MinusZ => Direction::PlusZ,
        }
    }
}

/// One of the four quasi-linearly polarized HE11 basis modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeId {
    pub p: MainPolarization,
    pub d: Direction,
}

impl ModeId {
    pub const ALL: [ModeId; 4] = [
        ModeId { p: MainPolarization::X, d: Direction::PlusZ },
        ModeId { p: MainPolarization::X, d: Direction::MinusZ },
        ModeId { p: MainPolarization::Y, d: Direction::PlusZ },
        ModeId { p: MainPolarization::Y, d: Direction::MinusZ },
    ];

    pub fn new(p: MainPolarization, d: Direction) -> Self {
        Self { p, d }
    }
}

/// Solved HE11 mode parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution<T> {
    /// Propagation constant (rad/nm).
    pub beta: T,
    /// Effective index `β / k`.
    pub n_eff: T,
    /// Core transverse wavenumber (rad/nm).
    pub h: T,
    /// Cladding decay constant (rad/nm).
    pub q: T,
    pub v_number: T,
    /// Hybrid-mode parameter `s` (close to -1 for HE11).
    pub s: T,
    /// Amplitude `A` (V/m) of the profile functions for 1 W guided power.
    pub norm_const: T,
    /// Normalized characteristic-equation residual at the root.
    pub residual: T,
}

/// Normalized residual of the characteristic equation at effective index
/// `n_eff`: `(L - R) / (|L| + |R|)`, bounded by 1 in magnitude and free of
/// poles at the zeros of `J_1`.
pub fn characteristic_residual<T: Real>(spec: &FiberSpec<T>, n_eff: T) -> T {
    let (u, w) = transverse_numbers(spec, n_eff);
    let (jr, kr) = log_derivative_ratios(u, w);
    let (n1s, n2s) = (spec.n_core * spec.n_core, spec.n_clad * spec.n_clad);
    let lhs = (jr + kr) * (n1s * jr + n2s * kr);
    let inv = T::one() / (u * u) + T::one() / (w * w);
    let rhs = n_eff * n_eff * inv * inv;
    let denom = lhs.abs() + rhs.abs();
    if denom == T::zero() || !denom.is_finite() {
        return T::nan();
    }
    (lhs - rhs) / denom
}

fn transverse_numbers<T: Real>(spec: &FiberSpec<T>, n_eff: T) -> (T, T) {
    let ka = spec.k0() * spec.radius_nm;
    let u = ka * (spec.n_core * spec.n_core - n_eff * n_eff).sqrt();
    let w = ka * (n_eff * n_eff - spec.n_clad * spec.n_clad).sqrt();
    (u, w)
}

/// `J_1'(u) / (u J_1(u))` and `K_1'(w) / (w K_1(w))`.
fn log_derivative_ratios<T: Real>(u: T, w: T) -> (T, T) {
    let j = j_table(1, u).expect("u > 0");
    let k = k_table(1, w).expect("w > 0");
    (j.derivatives[1] / (u * j.values[1]), k.derivatives[1] / (w * k.values[1]))
}

fn bisect<T: Real, F: Fn(T) -> T>(f: &F, mut lo: T, mut hi: T, mut f_lo: T, width: T) -> T {
    while hi - lo > width {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return mid;
        }
        if (f_mid > T::zero()) == (f_lo > T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) / T::lit(2.0)
}

/// Secant steps that stay inside `[lo, hi]` and only ever lower `|f|`.
fn secant_polish<T: Real, F: Fn(T) -> T>(f: &F, x0: T, lo: T, hi: T) -> T {
    let mut best = x0;
    let mut f_best = f(x0);
    let mut prev = if x0 - lo > hi - x0 { lo } else { hi };
    let mut f_prev = f(prev);
    for _ in 0..8 {
        if f_best == T::zero() || f_best == f_prev {
            break;
        }
        let next = best - f_best * (best - prev) / (f_best - f_prev);
        if !(next > lo && next < hi) {
            break;
        }
        let f_next = f(next);
        if f_next.abs() >= f_best.abs() {
            break;
        }
        prev = best;
        f_prev = f_best;
        best = next;
        f_best = f_next;
    }
    best
}

/// Solves for the HE11 propagation constant and power normalization.
///
/// Brackets come from a 2000-point scan of the characteristic residual over
/// `(n_clad, n_core)`; the largest-index sign change is refined by
/// bisection and a secant polish. Deterministic for a given input.
pub fn solve_he11<T: Real>(spec: &FiberSpec<T>) -> Result<ModeSolution<T>> {
    spec.validate()?;
    let (n1, n2) = (spec.n_core, spec.n_clad);
    let f = |n: T| characteristic_residual(spec, n);
    let at = |t: T| n2 + (n1 - n2) * t;
    let denom = T::from_usize(SCAN_POINTS + 1).unwrap();
    let samples: Vec<(T, T)> = (1..=SCAN_POINTS)
        .map(|i| {
            let n = at(T::from_usize(i).unwrap() / denom);
            (n, f(n))
        })
        .collect();

    let mut brackets: Vec<(T, T, T)> = samples
        .windows(2)
        .filter(|w| w[0].1.is_finite() && w[1].1.is_finite() && w[0].1 * w[1].1 <= T::zero())
        .map(|w| (w[0].0, w[1].0, w[0].1))
        .collect();
    if brackets.is_empty() {
        // Weak guidance: the root can sit below the first scan point.
        let mut t = T::one() / denom;
        let mut prev = samples[0];
        while t > T::epsilon() {
            t = t / T::lit(4.0);
            let n = at(t);
            let cur = (n, f(n));
            if cur.1.is_finite() && cur.1 * prev.1 <= T::zero() {
                brackets.push((cur.0, prev.0, cur.1));
                break;
            }
            prev = cur;
        }
    }

    let tol = T::solve_tol();
    let width = (T::lit(1e-13) * n1).max(T::epsilon() * T::lit(4.0) * n1);
    for &(lo, hi, f_lo) in brackets.iter().rev() {
        let root = bisect(&f, lo, hi, f_lo, width);
        let root = secant_polish(&f, root, lo, hi);
        let residual = f(root).abs();
        if residual < tol {
            return finish_solution(spec, root, residual);
        }
    }
    Err(Error::NoGuidedMode)
}

fn finish_solution<T: Real>(spec: &FiberSpec<T>, n_eff: T, residual: T) -> Result<ModeSolution<T>> {
    let k = spec.k0();
    let a = spec.radius_nm;
    let (u, w) = transverse_numbers(spec, n_eff);
    let (jr, kr) = log_derivative_ratios(u, w);
    let s = (T::one() / (u * u) + T::one() / (w * w)) / (jr + kr);
    let mut sol = ModeSolution {
        beta: n_eff * k,
        n_eff,
        h: u / a,
        q: w / a,
        v_number: spec.v_number(),
        s,
        norm_const: T::one(),
        residual,
    };
    sol.norm_const = normalize_power(spec, &sol, ModeId::ALL[0])?;
    Ok(sol)
}

/// Which side of the core boundary a radius belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Core,
    Cladding,
}

/// Quasi-circular profile functions at one radius (for `f = l = +1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProfile<T> {
    pub e_r: Complex<T>,
    pub e_phi: Complex<T>,
    pub e_z: Complex<T>,
    pub h_r: Complex<T>,
    pub h_phi: Complex<T>,
    pub h_z: Complex<T>,
}

/// A validated (spec, solution) pair ready for field evaluation.
#[derive(Debug, Clone, Copy)]
pub struct GuidedMode<T> {
    spec: FiberSpec<T>,
    sol: ModeSolution<T>,
    // J_1(ha) / K_1(qa)
    clad_ratio: T,
}

impl<T: Real> GuidedMode<T> {
    /// Fails with `MismatchedSolution` if `sol` does not solve `spec`.
    pub fn new(spec: &FiberSpec<T>, sol: &ModeSolution<T>) -> Result<Self> {
        spec.validate()?;
        let n_eff = sol.beta / spec.k0();
        let residual = characteristic_residual(spec, n_eff);
        if !(residual.abs() < T::solve_tol() * T::lit(10.0)) {
            return Err(Error::MismatchedSolution(residual.to_f64().unwrap_or(f64::NAN)));
        }
        let (u, w) = transverse_numbers(spec, n_eff);
        let clad_ratio = j_table(1, u)?.values[1] / k_table(1, w)?.values[1];
        Ok(Self { spec: *spec, sol: *sol, clad_ratio })
    }

    pub fn spec(&self) -> &FiberSpec<T> {
        &self.spec
    }

    pub fn solution(&self) -> &ModeSolution<T> {
        &self.sol
    }

    pub fn side_of(&self, r: T) -> Side {
        if r < self.spec.radius_nm {
            Side::Core
        } else {
            Side::Cladding
        }
    }

    /// Profile functions at radius `r` (nm), evaluated with the series of
    /// the requested `side` (either series may be evaluated at `r = a`).
    pub fn profile(&self, r: T, side: Side, amplitude: T) -> ModeProfile<T> {
        let FiberSpec { n_core, n_clad, .. } = self.spec;
        let ModeSolution { beta, h, q, s, .. } = self.sol;
        let k0 = self.spec.k0();
        let two = T::lit(2.0);
        let z0 = T::lit(VACUUM_IMPEDANCE_OHM);
        let one = T::one();
        let i = |v: T| Complex::new(T::zero(), v);
        let re = |v: T| Complex::new(v, T::zero());
        let hz_coef = amplitude * beta / k0 * s / z0;
        match side {
            Side::Core => {
                let j = j_table(2, h * r).expect("h r >= 0");
                let (j0, j1, j2) = (j.values[0], j.values[1], j.values[2]);
                let s1 = beta * beta * s / (k0 * k0 * n_core * n_core);
                let e = amplitude * beta / (two * h);
                let hc = amplitude * k0 * n_core * n_core / (two * h * z0);
                ModeProfile {
                    e_r: i(e * ((one - s) * j0 - (one + s) * j2)),
                    e_phi: re(-e * ((one - s) * j0 + (one + s) * j2)),
                    e_z: re(amplitude * j1),
                    h_r: re(hc * ((one - s1) * j0 + (one + s1) * j2)),
                    h_phi: i(hc * ((one - s1) * j0 - (one + s1) * j2)),
                    h_z: i(hz_coef * j1),
                }
            }
            Side::Cladding => {
                let k = k_table(2, q * r).expect("q r > 0");
                let (k0v, k1v, k2v) = (k.values[0], k.values[1], k.values[2]);
                let s2 = beta * beta * s / (k0 * k0 * n_clad * n_clad);
                let c = self.clad_ratio;
                let e = amplitude * beta / (two * q) * c;
                let hc = amplitude * k0 * n_clad * n_clad / (two * q * z0) * c;
                ModeProfile {
                    e_r: i(e * ((one - s) * k0v + (one + s) * k2v)),
                    e_phi: re(-e * ((one - s) * k0v - (one + s) * k2v)),
                    e_z: re(amplitude * c * k1v),
                    h_r: re(hc * ((one - s2) * k0v - (one + s2) * k2v)),
                    h_phi: i(hc * ((one - s2) * k0v + (one + s2) * k2v)),
                    h_z: i(hz_coef * c * k1v),
                }
            }
        }
    }

    fn azimuth_offset(p: MainPolarization) -> T {
        match p {
            MainPolarization::X => T::zero(),
            MainPolarization::Y => T::FRAC_PI_2(),
        }
    }

    /// Electric and magnetic field of basis mode `id` at `(x, y)` using the
    /// series of `side`.
    pub fn fields_on_side(&self, id: ModeId, x: T, y: T, side: Side) -> (FieldVector<T>, FieldVector<T>) {
        let r = x.hypot(y);
        let phi = y.atan2(x);
        let pr = self.profile(r, side, self.sol.norm_const);
        let f: T = id.d.sign();
        let (sn, cs) = (phi - Self::azimuth_offset(id.p)).sin_cos();
        let rt2 = T::SQRT_2();
        let i = Complex::new(T::zero(), T::one());
        let e =
            FieldVector::from_cylindrical(pr.e_r * (rt2 * cs), i * pr.e_phi * (rt2 * sn), pr.e_z * (rt2 * f * cs), phi);
        let h = FieldVector::from_cylindrical(
            i * pr.h_r * (rt2 * f * sn),
            pr.h_phi * (rt2 * f * cs),
            i * pr.h_z * (rt2 * sn),
            phi,
        );
        (e, h)
    }

    /// Electric field of basis mode `id` at `(x, y)` in nm. Points with
    /// `r >= a` use the cladding series.
    pub fn field(&self, id: ModeId, x: T, y: T) -> FieldVector<T> {
        self.fields_on_side(id, x, y, self.side_of(x.hypot(y))).0
    }

    /// Magnetic field of basis mode `id` at `(x, y)` in nm.
    pub fn magnetic_field(&self, id: ModeId, x: T, y: T) -> FieldVector<T> {
        self.fields_on_side(id, x, y, self.side_of(x.hypot(y))).1
    }

    pub fn intensity(&self, id: ModeId, x: T, y: T) -> T {
        self.field(id, x, y).norm_sqr()
    }

    /// Maximum `|E|²` on the cladding side of the fiber surface.
    pub fn surface_max_intensity(&self, id: ModeId) -> T {
        let a = self.spec.radius_nm;
        (0..SURFACE_SAMPLES)
            .map(|k| {
                let phi = T::TAU() * T::from_usize(k).unwrap() / T::from_usize(SURFACE_SAMPLES).unwrap();
                let (s, c) = phi.sin_cos();
                self.fields_on_side(id, a * c, a * s, Side::Cladding).0.norm_sqr()
            })
            .fold(T::zero(), T::max)
    }

    /// Azimuthally integrated axial Poynting flux density,
    /// `π Re(e_r h_φ* − e_φ h_r*) r`, in W/nm for profile amplitude
    /// `amplitude`.
    fn flux_density(&self, r: T, amplitude: T) -> T {
        let pr = self.profile(r, self.side_of(r), amplitude);
        let s = (pr.e_r * pr.h_phi.conj() - pr.e_phi * pr.h_r.conj()).re;
        T::PI() * s * r * T::lit(1e-18)
    }

    /// Total guided power (W) for profile amplitude `amplitude` (V/m).
    pub fn guided_power(&self, amplitude: T) -> Result<T> {
        let a = self.spec.radius_nm;
        let q = self.sol.q;
        let rel = T::lit(1e-12).max(T::epsilon() * T::lit(100.0));
        let f = |r: T| self.flux_density(r, amplitude);
        let core = quad::integrate(f, T::zero(), a, rel, 200)?;

        let peak = (0..=32).map(|k| f(a * T::from_int(k) / T::lit(16.0))).fold(T::zero(), |m, v| m.max(v.abs()));
        let cutoff = peak * T::lit(1e-14).max(T::epsilon());
        let step = T::lit(5.0) / q;
        let mut end = a + step;
        let mut guard = 0;
        while f(end).abs() > cutoff {
            end = end + step;
            guard += 1;
            if guard > 10_000 {
                return Err(Error::QuadratureFailure(guard));
            }
        }
        let clad = quad::integrate(f, a, end, rel, 400)?;
        Ok(core + clad)
    }
}

/// Profile amplitude giving 1 W of guided power. Equal for all four basis
/// modes, since each is an equal-weight superposition of two quasi-circular
/// modes of equal power.
pub fn normalize_power<T: Real>(spec: &FiberSpec<T>, sol: &ModeSolution<T>, _id: ModeId) -> Result<T> {
    let mode = GuidedMode::new(spec, sol)?;
    let p = mode.guided_power(T::one())?;
    if !(p > T::zero() && p.is_finite()) {
        return Err(Error::QuadratureFailure(0));
    }
    Ok(T::one() / p.sqrt())
}

/// Electric field of basis mode `id` at `point = (x, y)` in nm.
pub fn mode_field<T: Real>(
    spec: &FiberSpec<T>,
    sol: &ModeSolution<T>,
    id: ModeId,
    point: (T, T),
) -> Result<FieldVector<T>> {
    Ok(GuidedMode::new(spec, sol)?.field(id, point.0, point.1))
}

/// `|E|²` on `grid`, optionally divided by the maximum on the fiber surface.
pub fn intensity_map<T: Real>(
    spec: &FiberSpec<T>,
    sol: &ModeSolution<T>,
    id: ModeId,
    grid: &GridSpec<T>,
    normalize_to_surface: bool,
) -> Result<FieldMap<T, T>> {
    grid.validate()?;
    let mode = GuidedMode::new(spec, sol)?;
    let scale = if normalize_to_surface { T::one() / mode.surface_max_intensity(id) } else { T::one() };
    let values = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let (x, y) = grid.node(i);
            mode.intensity(id, x, y) * scale
        })
        .collect();
    Ok(FieldMap { grid: *grid, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn solved() -> (FiberSpec<f64>, ModeSolution<f64>) {
        let spec = FiberSpec::silica_nanofiber();
        let sol = solve_he11(&spec).unwrap();
        (spec, sol)
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(matches!(FiberSpec::new(0.0, 852.0, 1.45, 1.0), Err(Error::InvalidSpec(_))));
        assert!(matches!(FiberSpec::new(250.0, -1.0, 1.45, 1.0), Err(Error::InvalidSpec(_))));
        assert!(matches!(FiberSpec::new(250.0, 852.0, 1.0, 1.0), Err(Error::InvalidSpec(_))));
        assert!(matches!(FiberSpec::new(250.0, 852.0, 1.45, 0.9), Err(Error::InvalidSpec(_))));
        let bad = FiberSpec { radius_nm: 250.0, wavelength_nm: 852.0, n_core: 1.2, n_clad: 1.3 };
        assert!(matches!(solve_he11(&bad), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn solution_respects_guidance_bounds() {
        let (spec, sol) = solved();
        let k = spec.k0();
        assert!(sol.beta > spec.n_clad * k && sol.beta < spec.n_core * k);
        assert_relative_eq!(sol.h * sol.h, spec.n_core.powi(2) * k * k - sol.beta.powi(2), max_relative = 1e-10);
        assert_relative_eq!(sol.q * sol.q, sol.beta.powi(2) - k * k, max_relative = 1e-10);
        assert!(sol.residual < 1e-10);
        assert!(sol.s < 0.0 && sol.s > -1.0);
    }

    #[test]
    fn solve_is_deterministic() {
        let spec = FiberSpec::<f64>::silica_nanofiber();
        let a = solve_he11(&spec).unwrap();
        let b = solve_he11(&spec).unwrap();
        assert_eq!(a.beta.to_bits(), b.beta.to_bits());
        assert_eq!(a.norm_const.to_bits(), b.norm_const.to_bits());
    }

    #[test]
    fn mismatched_solution_rejected() {
        let (spec, mut sol) = solved();
        sol.beta *= 1.01;
        let r = mode_field(&spec, &sol, ModeId::ALL[0], (480.0, 0.0));
        assert!(matches!(r, Err(Error::MismatchedSolution(_))));
    }

    #[test]
    fn multimode_fiber_still_returns_he11() {
        let spec = FiberSpec::new(2000.0, 852.0, 1.4525, 1.0).unwrap();
        let sol = solve_he11(&spec).unwrap();
        assert!(sol.v_number > 2.405);
        // HE11 is the highest-index guided mode
        assert!(sol.n_eff > 1.44);
    }

    #[test]
    fn weakly_guiding_thin_fiber_solves() {
        let spec = FiberSpec::new(60.0, 852.0, 1.4525, 1.0).unwrap();
        let sol = solve_he11(&spec).unwrap();
        assert!(sol.n_eff > 1.0 && sol.n_eff < 1.01);
        assert!(sol.residual < 1e-10);
    }

    #[test]
    fn amplitude_doubling_quarters_power() {
        let (spec, sol) = solved();
        let mode = GuidedMode::new(&spec, &sol).unwrap();
        let p1 = mode.guided_power(1.0).unwrap();
        let p2 = mode.guided_power(2.0).unwrap();
        assert_relative_eq!(p2, 4.0 * p1, max_relative = 1e-12);
    }

    #[test]
    fn sellmeier_values() {
        assert!(sellmeier_silica(100.0f64).is_err());
        assert!(sellmeier_silica(4000.0f64).is_err());
        assert!(sellmeier_silica(1064.0f64).unwrap() < sellmeier_silica(852.0f64).unwrap());
    }

    #[test]
    fn single_precision_solver() {
        let spec = FiberSpec::<f32>::silica_nanofiber();
        let sol = solve_he11(&spec).unwrap();
        assert!((sol.n_eff - 1.14399).abs() < 1e-3);
    }
}
