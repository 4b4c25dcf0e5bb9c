use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("group mismatch: {0} vs {1}")]
    GroupMismatch(String, String),
    #[error("element lies on the cut locus of the principal domain")]
    CutLocus,
    #[error("element outside the chart domain: {0}")]
    OutOfDomain(String),
    #[error("coordinates outside the chart range: {0}")]
    OutOfRange(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("grid mismatch")]
    GridMismatch,
    #[error("unsupported chart: {0}")]
    UnsupportedChart(String),
    #[error("distribution is not a regular function on a non-compact group")]
    NotRegular,
    #[error("star monomial order {0} exceeds the supported maximum of 4")]
    OrderOverflow(usize),
    #[error("kinetic symbol fit residual {0:e} exceeds tolerance")]
    ChartAnomaly(f64),
    #[error("Taylor coefficient extraction failed: {0}")]
    TaylorFailure(String),
    #[error("unsupported group for this operation: {0}")]
    UnsupportedGroup(String),
    #[error("spectral truncation inadequate: tail {0:e}")]
    TruncationInadequate(f64),
    #[error("kernel is not central")]
    NonCentral,
    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
