use thiserror::Error;

/// Errors produced by construction, validation, and inference routines.
#[derive(Debug, Error)]
pub enum CotError {
    #[error("sample is empty")]
    EmptySample,
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("grid resolution mismatch: {0} vs {1}")]
    ResolutionMismatch(usize, usize),
    #[error("grid resolution must be positive")]
    ZeroResolution,
    #[error("cdf grid is not monotone at index {0}")]
    NonMonotoneCdf(usize),
    #[error("cdf grid must end at 1, got {0}")]
    CdfEndpoint(f64),
    #[error("cdf difference is numerically zero; the inputs coincide")]
    IdenticalDistributions,
    #[error("level-median crossing at t = {t} has near-zero slope {slope:e}")]
    TangentialCrossing { t: f64, slope: f64 },
    #[error("cdf difference is flat near t = {t} while away from its level median")]
    FlatDifference { t: f64 },
    #[error("crossing structure invalid: {0}")]
    InvalidCrossings(String),
    #[error("bootstrap: {0}")]
    Bootstrap(String),
    #[error("unknown test label: {0}")]
    UnknownTest(String),
    #[error("mixing proportion must lie strictly inside (0, 1), got {0}")]
    InvalidProportion(f64),
    #[error("line {line}: cannot parse angle from {content:?}")]
    AngleParse { line: usize, content: String },
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CotError>;
