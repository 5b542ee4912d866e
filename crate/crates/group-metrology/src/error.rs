use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator has dimension 0")]
    EmptyOperator,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("maximizer hit the search boundary at s = {s:e}; widen the domain")]
    BoundaryHit { s: f64 },
    #[error("gamma curve failed the concavity check: {0}")]
    InvalidCurve(String),
    #[error("no finite risk: {0}")]
    Unbounded(String),
    #[error("energy {energy} is below the sector minimum {minimum}")]
    InfeasibleEnergy { energy: f64, minimum: f64 },
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
    #[error("grid resolution exceeded: {0}")]
    Resolution(String),
    #[error("protocol precondition violated: {0}")]
    Precondition(String),
    #[error("likelihood was flat in {flat} of {trials} trials, above the allowed cap")]
    TooManyFlat { flat: usize, trials: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
