use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("unsupported dimension {0} (small-matrix routines handle 1..=4)")]
    UnsupportedDimension(usize),

    #[error("matrix is singular (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("matrix exponential overflow guard: |M t|_1 = {norm:.3e} exceeds {limit:.1e}")]
    ExpmOverflow { norm: f64, limit: f64 },

    #[error("invalid excitation number {0}")]
    InvalidExcitation(usize),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("closed form not applicable: {0}")]
    FallbackRequired(String),

    #[error("block ({n},{m}) is degenerate; spectral propagation unavailable")]
    DegenerateBlock { n: usize, m: usize },

    #[error("method unavailable: {0}")]
    MethodUnavailable(String),

    #[error("photon truncation {0} exceeds the supported maximum of 12")]
    TruncationTooLarge(usize),

    #[error("photon truncation {n_max} too small for excitation {needed}")]
    TruncationTooSmall { needed: usize, n_max: usize },

    #[error("integration step too large: step-halving estimate {estimate:.3e}")]
    StepTooLarge { estimate: f64 },

    #[error("unphysical result: {0}")]
    Unphysical(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
