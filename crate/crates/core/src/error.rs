use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid fiber specification: {0}")]
    InvalidSpec(String),
    #[error("no guided HE11 root in the index bracket")]
    NoGuidedMode,
    #[error("mode solution does not satisfy the characteristic equation (residual {0:e})")]
    MismatchedSolution(f64),
    #[error("quadrature did not reach tolerance within {0} subdivisions")]
    QuadratureFailure(usize),
    #[error("field vanishes, polarization undefined")]
    ZeroField,
    #[error("vector is not unit norm (|u| = {0})")]
    NonUnitVector(f64),
    #[error("invalid quantization frame: {0}")]
    InvalidFrame(String),
    #[error("invalid angular momenta: {0}")]
    InvalidAngularMomentum(String),
    #[error("no allowed decay channel")]
    NoDecayChannel,
    #[error("atom at r = {r_nm} nm lies inside the fiber (a = {a_nm} nm)")]
    AtomInsideFiber { r_nm: f64, a_nm: f64 },
    #[error("closed-form and channel-sum emission paths disagree by {0:e}")]
    CrossCheck(f64),
    #[error("invalid scattering specification: {0}")]
    InvalidScatterSpec(String),
    #[error("empty grid: {0}")]
    EmptyGrid(String),
    #[error("invalid detection configuration: {0}")]
    InvalidDetection(String),
    #[error("estimator undefined: {0}")]
    EstimatorUndefined(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
