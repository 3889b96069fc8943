use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("covariance violates the uncertainty relation (min eigenvalue {min_eigenvalue:.3e})")]
    Unphysical { min_eigenvalue: f64 },

    #[error("covariance is not symmetric (max deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("Husimi matrix is not positive definite on the requested modes")]
    NotPositiveDefinite,

    #[error("{size} clicked bins exceed the desk-scale cap of {cap}")]
    SubsetCapExceeded { size: usize, cap: usize },

    #[error("conditional probability chain exceeded the cap at prefix {prefix:?}")]
    ChainCapExceeded { prefix: Vec<u8>, cap: usize },

    #[error("sample {index} ({pattern:?}) has zero probability under the {hypothesis} hypothesis")]
    ZeroProbability {
        index: usize,
        pattern: Vec<u8>,
        hypothesis: &'static str,
    },

    #[error("no samples with {n} total clicks")]
    NoSamples { n: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("cumulant order {order} exceeds the supported maximum of {max}")]
    OrderTooHigh { order: usize, max: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config fingerprint mismatch: samples carry {found}, config is {expected}")]
    FingerprintMismatch { expected: String, found: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
