use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix must have at least one row")]
    Empty,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: defect {defect:e} exceeds tolerance {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("eigensolver did not converge within {iterations} iterations")]
    EigenConvergence { iterations: usize },

    #[error("state is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("eigenpair residual {residual:e} exceeds tolerance {tolerance:e}")]
    EigenpairResidual { residual: f64, tolerance: f64 },

    #[error("chain length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("chain length {len} outside supported range {min}..={max}")]
    LengthOutOfRange { len: usize, min: usize, max: usize },

    #[error("degenerate eigenpair: spectral gap vanishes")]
    DegenerateGap,

    #[error("number of Trotter steps must be at least 1")]
    ZeroSteps,

    #[error("splitting commutes: [A, B] = 0")]
    CommutingSplitting,

    #[error("sin(gap * t / 2) vanishes at t = {t}: no finite step threshold")]
    Resonance { t: f64 },

    #[error("vanishing overlap <psi|A phi>: the state bound is never non-trivial")]
    VanishingOverlap,

    #[error("lower bound is nowhere positive on (0, {t_max}]")]
    TrivialBound { t_max: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
