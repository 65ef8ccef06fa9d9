//! Crate-wide error type.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the analysis routines.
///
/// Variants carry enough context to be rendered as a one-line reason by
/// front ends; `kind()` gives a stable machine-readable tag.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid tolerance configuration: {0}")]
    BadTolerance(String),

    #[error("root iteration failed to converge: max scaled residual {residual:.3e}")]
    RootIteration {
        /// Best iterates at the point of failure.
        best: Vec<Complex64>,
        residual: f64,
    },

    #[error("{eta} is not an eigenvalue of the matrix under the rank tolerance")]
    NotAnEigenvalue { eta: Complex64 },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not positive definite: leading minor {minor} fails")]
    NotPositiveDefinite { minor: usize },

    #[error("Jordan structure mismatch: expected blocks {expected:?}, found {found:?}")]
    SpecMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("no invertible transition matrix found within the search budget")]
    DegenerateChain,

    #[error("EP obstruction: non-diagonalizable input")]
    EpObstruction,

    #[error("broken reality: spectrum contains complex eigenvalues")]
    BrokenReality,

    #[error("parameter domain error: {0}")]
    Domain(String),

    #[error("unknown parameter `{name}` for model `{model}`; expected {expected:?}")]
    UnknownParameter {
        model: String,
        name: String,
        expected: Vec<&'static str>,
    },

    #[error("missing parameter for model `{model}`; expected {expected:?}")]
    MissingParameter {
        model: String,
        expected: Vec<&'static str>,
    },

    #[error("no EP found in bracket: achieved minimum |discriminant| {achieved:.3e}")]
    EpNotFound { achieved: f64 },

    #[error("all branch distances below the noise floor; no exponent can be fitted")]
    NoiseFloor,

    #[error("residual check failed: {0}")]
    ResidualCheck(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag for front ends and exit-code mapping.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::NonSquare { .. } => "non_square",
            Error::NonFinite { .. } => "non_finite",
            Error::BadTolerance(_) => "bad_tolerance",
            Error::RootIteration { .. } => "root_iteration",
            Error::NotAnEigenvalue { .. } => "not_an_eigenvalue",
            Error::Singular => "singular",
            Error::NotPositiveDefinite { .. } => "not_positive_definite",
            Error::SpecMismatch { .. } => "spec_mismatch",
            Error::DegenerateChain => "degenerate_chain",
            Error::EpObstruction => "ep_obstruction",
            Error::BrokenReality => "broken_reality",
            Error::Domain(_) => "domain",
            Error::UnknownParameter { .. } => "unknown_parameter",
            Error::MissingParameter { .. } => "missing_parameter",
            Error::EpNotFound { .. } => "ep_not_found",
            Error::NoiseFloor => "noise_floor",
            Error::ResidualCheck(_) => "residual_check",
            Error::Parse(_) => "parse",
        }
    }

    /// True for errors caused by invalid usage (bad flags, malformed files,
    /// unknown parameters) rather than by the mathematics of the input.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::UnknownParameter { .. }
                | Error::MissingParameter { .. }
                | Error::BadTolerance(_)
                | Error::NonFinite { .. }
        )
    }
}
