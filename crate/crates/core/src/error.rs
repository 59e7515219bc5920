use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spectrum needs at least 2 levels, got {0}")]
    EmptySpectrum(usize),
    #[error("spectrum levels must be finite and nondecreasing (level {index})")]
    UnsortedSpectrum { index: usize },
    #[error("degenerate local ground state in subsystem {0} (X_1 = X_0)")]
    DegenerateGround(char),
    #[error("entanglement {value} outside the open interval (0, {max})")]
    OutOfRange { value: f64, max: f64 },
    #[error("all diagonal energies are equal; entropy does not depend on beta")]
    NonMonotone,
    #[error("target vector has (near) zero norm")]
    ZeroVector,
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("closed form undefined: ground-state weight lambda_0 is zero")]
    ZeroLambda0,
    #[error("target carries no excitation: efficiency is 0/0")]
    ZeroEntanglementTarget,
    #[error("leak epsilon must lie in (0, 1), got {0}")]
    InvalidLeak(f64),
    #[error("coupling strength only applies to the simple approaches, not {0}")]
    NotSimpleApproach(String),
    #[error("approach {approach} cannot realize samples from the {measure} measure")]
    MeasureMismatch { approach: String, measure: String },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("unknown approach `{0}`")]
    UnknownApproach(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("geometry mismatch between histograms")]
    GeometryMismatch,
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
