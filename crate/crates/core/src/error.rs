use std::io;

use thiserror::Error;

/// Errors produced by selection, batch processing, matrix I/O and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("row is empty")]
    EmptyRow,

    /// `row` is set when the offending element was found inside a matrix.
    #[error("NaN input at {}", nan_location(*.row, *.index))]
    NanInput { row: Option<usize>, index: usize },

    #[error("k = {k} out of range: must satisfy 1 <= k <= {m}")]
    KOutOfRange { k: usize, m: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix must have at least one row and one column, got {n_rows}x{n_cols}")]
    EmptyMatrix { n_rows: usize, n_cols: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("bad magic bytes: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),

    #[error("file truncated: expected {expected} bytes, found {found}")]
    TruncatedFile { expected: u64, found: u64 },

    #[error("I/O failure: {0}")]
    Io(#[from] io::Error),

    #[error("result sizes differ: candidate has k = {candidate}, optimal has k = {optimal}")]
    KMismatch { candidate: usize, optimal: usize },

    #[error("reference extreme {0:e} too close to zero for a relative error")]
    DegenerateDenominator(f64),

    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),

    #[error("probability {0} outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("no input to aggregate")]
    EmptyInput,
}

fn nan_location(row: Option<usize>, index: usize) -> String {
    match row {
        Some(r) => format!("row {r}, column {index}"),
        None => format!("index {index}"),
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
