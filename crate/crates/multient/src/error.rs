//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("amplitude vector has length {got}, expected d^n = {expected}")]
    AmplitudeCount { expected: usize, got: usize },

    #[error("state vector has zero norm")]
    ZeroNorm,

    #[error("operator is zero")]
    ZeroOperator,

    #[error("party subset must be a nonempty proper subset of 1..={n}")]
    BadSubset { n: usize },

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },

    #[error("operator is not unitary within {tol:e} (max deviation {dev:e})")]
    NotUnitary { dev: f64, tol: f64 },

    #[error("images array of length {len} is not a bijection on 0..{len}")]
    NotBijective { len: usize },

    #[error("phase array has length {got}, expected {expected}")]
    PhaseCount { expected: usize, got: usize },

    #[error("unsupported local dimension {0} for this operation")]
    UnsupportedDimension(usize),

    #[error("unknown catalog state `{0}`")]
    UnknownName(String),

    #[error("missing parameter `{0}`")]
    MissingParam(String),

    #[error("empty parameter grid")]
    EmptyGrid,

    #[error("point ({x}, {y}, {z}) lies outside the chamber 0 <= |z| <= y <= x <= pi/4")]
    OutsideChamber { x: f64, y: f64, z: f64 },

    #[error("polygon solver did not converge: best residual {best_residual:e} after {restarts} starts")]
    SolverFailure { best_residual: f64, restarts: u32 },

    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    /// `true` for errors caused by caller input, `false` for numeric or
    /// solver failures. The CLI maps the former to exit code 2 and the
    /// latter to exit code 3.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::SolverFailure { .. } | Error::Internal(_))
    }
}
