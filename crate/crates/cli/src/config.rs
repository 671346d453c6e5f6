//! JSON run configuration.

use std::fs;
use std::path::{Path, PathBuf};

use nanofiber_core::{
    sellmeier_silica, DetectionConfig64, DetectorMapping, Direction, FiberSpec64, GridSpec64, JonesVector,
    MainPolarization, ModeId, QuantizationFrame64, ScatterSpec64, TransitionSpec,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// A refractive index given as a number or as `"sellmeier"` (fused silica at
/// the configured wavelength).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Index {
    Value(f64),
    Model(IndexModel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexModel {
    Sellmeier,
}

impl Index {
    fn resolve(self, wavelength_nm: f64) -> CliResult<f64> {
        match self {
            Index::Value(v) => Ok(v),
            Index::Model(IndexModel::Sellmeier) => {
                sellmeier_silica(wavelength_nm).map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberConfig {
    pub radius_nm: f64,
    pub wavelength_nm: f64,
    pub n_core: Index,
    pub n_clad: Index,
}

impl Default for FiberConfig {
    fn default() -> Self {
        Self {
            radius_nm: 250.0,
            wavelength_nm: 852.0,
            n_core: Index::Model(IndexModel::Sellmeier),
            n_clad: Index::Value(1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    pub x_nm: f64,
    pub y_nm: f64,
}

/// Incident polarization: a named state or an explicit `(x, z)` Jones
/// vector of `[re, im]` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolarizationConfig {
    Named(NamedPolarization),
    Jones { x: [f64; 2], z: [f64; 2] },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedPolarization {
    SigmaMinus,
    SigmaPlus,
    LinearX,
    LinearZ,
}

impl PolarizationConfig {
    fn jones(self) -> JonesVector<f64> {
        match self {
            PolarizationConfig::Named(NamedPolarization::SigmaMinus) => JonesVector::sigma_minus(),
            PolarizationConfig::Named(NamedPolarization::SigmaPlus) => JonesVector::sigma_plus(),
            PolarizationConfig::Named(NamedPolarization::LinearX) => JonesVector::linear_x(),
            PolarizationConfig::Named(NamedPolarization::LinearZ) => JonesVector::linear_z(),
            PolarizationConfig::Jones { x, z } => {
                JonesVector { x: Complex64::new(x[0], x[1]), z: Complex64::new(z[0], z[1]) }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterConfig {
    pub cylinder_radius_nm: f64,
    pub cylinder_index: Index,
    pub medium_index: f64,
    pub wavelength_nm: f64,
    pub polarization: PolarizationConfig,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        Self {
            cylinder_radius_nm: 250.0,
            cylinder_index: Index::Model(IndexModel::Sellmeier),
            medium_index: 1.0,
            wavelength_nm: 852.0,
            polarization: PolarizationConfig::Named(NamedPolarization::SigmaMinus),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Destination of the command's payload; stdout when absent.
    pub path: Option<PathBuf>,
}

/// Complete run configuration. Missing sections take their defaults;
/// unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub schema_version: u32,
    pub fiber: FiberConfig,
    /// Quantization axis in fiber coordinates.
    pub frame_axis: [f64; 3],
    /// Propagation direction collected by detector 1.
    pub detector_1: Direction,
    /// Basis mode used by the guided-mode maps.
    pub mode: ModeId,
    pub sites: Vec<SiteConfig>,
    pub states: Vec<TransitionSpec>,
    pub grid: GridSpec64,
    pub scatter: ScatterConfig,
    pub mc: DetectionConfig64,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let cs = |m| TransitionSpec::cs_d2(m).expect("valid Cs D2 sublevel");
        Self {
            schema_version: SCHEMA_VERSION,
            fiber: FiberConfig::default(),
            frame_axis: [0.0, 1.0, 0.0],
            detector_1: Direction::PlusZ,
            mode: ModeId::new(MainPolarization::X, Direction::PlusZ),
            sites: vec![SiteConfig { x_nm: -480.0, y_nm: 0.0 }, SiteConfig { x_nm: 480.0, y_nm: 0.0 }],
            states: vec![cs(-5), cs(-1)],
            grid: GridSpec64::square(1000.0, 201),
            scatter: ScatterConfig::default(),
            // placeholder efficiencies; the loss-corrected estimate does not depend on them
            mc: DetectionConfig64::new(100, 10_000, 0.5, 0.5, 1),
            output: OutputConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if !value.is_object() {
            return Err(CliError::Config("configuration must be a JSON object".into()));
        }
        let cfg: RunConfig = serde_json::from_value(value).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {}, expected {SCHEMA_VERSION}",
                self.schema_version
            )));
        }
        let bad = |e: nanofiber_core::Error| CliError::Config(e.to_string());
        self.fiber_spec()?;
        self.frame()?;
        self.scatter_spec()?;
        self.grid.validate().map_err(bad)?;
        self.mc.validate().map_err(bad)?;
        for s in &self.states {
            s.validate().map_err(bad)?;
        }
        if self.sites.iter().any(|s| !(s.x_nm.is_finite() && s.y_nm.is_finite())) {
            return Err(CliError::Config("site coordinates must be finite".into()));
        }
        Ok(())
    }

    pub fn fiber_spec(&self) -> CliResult<FiberSpec64> {
        let f = &self.fiber;
        let n_core = f.n_core.resolve(f.wavelength_nm)?;
        let n_clad = f.n_clad.resolve(f.wavelength_nm)?;
        FiberSpec64::new(f.radius_nm, f.wavelength_nm, n_core, n_clad).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn frame(&self) -> CliResult<QuantizationFrame64> {
        QuantizationFrame64::along_axis(self.frame_axis).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn detectors(&self) -> DetectorMapping {
        DetectorMapping { detector_1: self.detector_1 }
    }

    pub fn scatter_spec(&self) -> CliResult<ScatterSpec64> {
        let s = &self.scatter;
        let spec = ScatterSpec64 {
            cylinder_radius_nm: s.cylinder_radius_nm,
            cylinder_index: s.cylinder_index.resolve(s.wavelength_nm)?,
            medium_index: s.medium_index,
            wavelength_nm: s.wavelength_nm,
            incident_polarization: s.polarization.jones(),
        };
        spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(spec)
    }
}
