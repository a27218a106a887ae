use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {dim} exceeds the configured maximum {max}")]
    TruncationTooLarge { dim: usize, max: usize },

    #[error("factor index {index} is not valid for a space with {factors} factors")]
    BadFactor { index: usize, factors: usize },

    #[error("matrix is not Hermitian (relative deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("occupation {requested} exceeds the truncation N_max = {n_max}")]
    ExceedsTruncation { requested: usize, n_max: usize },

    #[error("truncated tail mass {tail:.3e} exceeds tolerance {tol:.3e} at N_max = {n_max}")]
    TruncationTooSmall { tail: f64, tol: f64, n_max: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a valid state: {0}")]
    NotAState(String),

    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("|xi| = {0} is outside the low-squeezing validity range |xi| <= 0.2")]
    OutOfValidity(f64),

    #[error("oscillation period estimate {period:.4} exceeds horizon/10 = {limit:.4}")]
    InsufficientHorizon { period: f64, limit: f64 },

    #[error("series has {got} samples; at least {need} uniformly spaced samples are required")]
    InsufficientSamples { got: usize, need: usize },

    #[error("no verdict switch over [{lo}, {hi}]: both endpoints are {label}")]
    NoSwitch { lo: f64, hi: f64, label: String },

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
