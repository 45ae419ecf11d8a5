use thiserror::Error;

/// Everything that can go wrong while counting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DimerError {
    #[error("invalid dimensions {rows}x{cols}: {reason}")]
    InvalidDimensions {
        rows: usize,
        cols: usize,
        reason: &'static str,
    },
    #[error("sign class {0} is only defined on the torus")]
    InvalidSignClass(&'static str),
    #[error("inexact Gaussian-integer division")]
    InexactDivision,
    #[error("torus sign calibration failed: {0}")]
    SignCalibrationFailure(String),
    #[error("precision exhausted at {bits} bits: {detail}")]
    PrecisionExhausted { bits: u32, detail: String },
    #[error("{what} on {cells} cells exceeds the enumeration limit of {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        cells: usize,
        limit: usize,
    },
    #[error("invalid boundary configuration: {0}")]
    InvalidBoundary(String),
    #[error("invalid tiling code at bit {bit_index}: {reason}")]
    InvalidCode {
        bit_index: usize,
        reason: &'static str,
    },
    #[error("quadrature could not certify tolerance {tolerance:e} (error bound {error_bound:e} after {cells} cells)")]
    ToleranceNotMet {
        tolerance: f64,
        error_bound: f64,
        cells: usize,
    },
}

pub type Result<T> = std::result::Result<T, DimerError>;
