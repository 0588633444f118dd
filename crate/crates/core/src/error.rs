//! Error type shared by the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    Domain(String),

    #[error("value {value} outside of [{lo}, {hi}]")]
    Range { value: f64, lo: f64, hi: f64 },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("inadmissible state {state:?}")]
    Admissibility { state: Vec<f64> },

    #[error("unrecoverable state at cell {cell}, element {element}, node {node}: {detail}")]
    Unrecoverable {
        cell: usize,
        element: usize,
        node: usize,
        detail: String,
    },

    #[error("order undefined: {0}")]
    UndefinedOrder(String),

    #[error("singular evaluation: {0}")]
    Singularity(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for errors that mean the time integration cannot continue.
    pub fn is_unrecoverable(&self) -> bool {
        matches!(self, Error::Unrecoverable { .. } | Error::Admissibility { .. })
    }
}
