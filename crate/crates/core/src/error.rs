use thiserror::Error;

/// Errors raised by the operator, measurement and spectral routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is empty")]
    Empty,

    #[error("not Hermitian: max |a_ij - conj(a_ji)| = {max_asymmetry:e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("not a density matrix: {reason}")]
    NotDensity { reason: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("function is not finite at eigenvalue {eigenvalue}")]
    Domain { eigenvalue: f64 },

    #[error("vectors are not orthonormal: max |<v_i, v_j> - delta_ij| = {max_deviation:e}")]
    NotOrthonormal { max_deviation: f64 },

    #[error("not a projector: max |P^2 - P| = {max_deviation:e}")]
    NotProjector { max_deviation: f64 },

    #[error("invalid POVM: {reason}")]
    InvalidPovm { reason: String },

    #[error("invalid measure: {reason}")]
    InvalidMeasure { reason: String },

    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("rank {rank} is not in 1..={dim}")]
    InvalidRank { rank: usize, dim: usize },

    #[error("label mismatch at index {index}: {left:?} vs {right:?}")]
    LabelMismatch {
        index: usize,
        left: String,
        right: String,
    },

    #[error("measure is not absolutely continuous at label {label:?} (mass {mass:e} over zero reference)")]
    AbsoluteContinuity { label: String, mass: f64 },

    #[error("product measure does not majorize the Liouville matrix at ({row}, {col}): excess {excess:e}")]
    MajorantViolation { row: usize, col: usize, excess: f64 },

    #[error("majorant has zero mass on the support at label {label:?}")]
    ZeroMajorantMass { label: String },

    #[error("weight {index} is not positive: {value}")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("minimum not bracketed: {reason}")]
    Unbracketable { reason: String },

    #[error("truncation insufficient: relative tail {tail:e}")]
    Truncation { tail: f64 },

    #[error("quadrature grid too coarse: mass {mass} deviates from 1")]
    GridTooCoarse { mass: f64 },

    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),

    #[error("report serialization failed: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
