//! Guided HE11 modes of an optical nanofiber, their local polarization,
//! direction-resolved emission of atoms near the fiber, plane-wave
//! scattering by a dielectric cylinder, and a photon-counting simulation of
//! the two-detector directionality measurement.
//!
//! Lengths are in nanometres. Every numerical type is generic over
//! [`Real`] (`f32` or `f64`); the `*64` aliases below fix `f64`.
//! Branching ratios are exact rationals.
//!
//! ```
//! use nanofiber_core::{solve_he11, FiberSpec64};
//!
//! let spec = FiberSpec64::silica_nanofiber();
//! let mode = solve_he11(&spec).unwrap();
//! assert!(mode.n_eff > 1.14 && mode.n_eff < 1.15);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod atomics;
pub mod cylscatter;
pub mod emission;
pub mod error;
pub mod fibermode;
pub mod grid;
pub mod mcsim;
pub mod output;
pub mod polarization;
pub mod quad;
pub mod real;
pub mod specfun;
pub mod vector;

pub use atomics::{branching, clebsch_gordan_sq, BranchingTable, HalfInt, TransitionSpec};
pub use cylscatter::{
    scatter_map, solve_scattering, solve_scattering_truncated, total_field, JonesVector, ScatterSolution, ScatterSpec,
};
pub use emission::{
    directionality_sweep, eta_fractions, guided_rate, AtomSite, DetectorMapping, EmissionModel, EmissionResult,
    SweepRow,
};
pub use error::{Error, Result};
pub use fibermode::{
    characteristic_residual, intensity_map, mode_field, normalize_power, sellmeier_silica, solve_he11, Direction,
    FiberSpec, GuidedMode, MainPolarization, ModeId, ModeSolution, Side,
};
pub use grid::{FieldMap, GridSpec};
pub use mcsim::{simulate, simulate_fraction, simulate_with_model, CountRecord, DetectionConfig};
pub use polarization::{
    local_polarization, overlap_map, overlaps, polarization_map, spin_density, unit_polarization, Channel,
    LocalPolarization, PolarizationOverlap, QuantizationFrame, SpinDensityVector,
};
pub use real::Real;
pub use vector::FieldVector;

pub type FiberSpec64 = FiberSpec<f64>;
pub type ModeSolution64 = ModeSolution<f64>;
pub type GuidedMode64 = GuidedMode<f64>;
pub type FieldVector64 = FieldVector<f64>;
pub type GridSpec64 = GridSpec<f64>;
pub type QuantizationFrame64 = QuantizationFrame<f64>;
pub type PolarizationOverlap64 = PolarizationOverlap<f64>;
pub type LocalPolarization64 = LocalPolarization<f64>;
pub type AtomSite64 = AtomSite<f64>;
pub type EmissionModel64 = EmissionModel<f64>;
pub type EmissionResult64 = EmissionResult<f64>;
pub type ScatterSpec64 = ScatterSpec<f64>;
pub type ScatterSolution64 = ScatterSolution<f64>;
pub type DetectionConfig64 = DetectionConfig<f64>;
pub type CountRecord64 = CountRecord<f64>;

pub type FiberSpec32 = FiberSpec<f32>;
pub type ModeSolution32 = ModeSolution<f32>;
pub type FieldVector32 = FieldVector<f32>;
