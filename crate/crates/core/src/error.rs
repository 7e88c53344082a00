use thiserror::Error;

use crate::fieldlang::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("duplicate structure entry (i={i}, j={j}, k={k})")]
    DuplicateEntry { i: usize, j: usize, k: usize },

    #[error("structure entry with i = j = {i} (k={k}) must be zero")]
    DiagonalEntry { i: usize, k: usize },

    #[error("structure entry (i={i}, j={j}, k={k}) must satisfy i < j")]
    NonCanonicalEntry { i: usize, j: usize, k: usize },

    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("Jacobi identity fails at (i={i}, j={j}, l={l}), component {m}: residual {residual}")]
    JacobiViolation {
        i: usize,
        j: usize,
        l: usize,
        m: usize,
        residual: String,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),

    #[error("parameter {param} out of range for {name} (supported: {supported})")]
    ParamOutOfRange {
        name: String,
        param: usize,
        supported: String,
    },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid flow configuration: {0}")]
    InvalidFlow(String),

    #[error("non-finite state at t = {t} after {accepted} samples")]
    NonFinite {
        t: f64,
        accepted: usize,
        partial: Box<crate::flow::Trajectory>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
