use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum QdError {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("character table eigenvalues not separated (min gap {gap:.3e} < tolerance {tol:.1e}); retry with a smaller clustering tolerance")]
    NumericDegeneracy { gap: f64, tol: f64 },

    #[error("class function is not a character: multiplicity residual {residual:.3e} for irrep {irrep}")]
    NotACharacter { irrep: String, residual: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("iterative eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QdError>;

impl From<serde_json::Error> for QdError {
    fn from(e: serde_json::Error) -> Self {
        QdError::Parse(e.to_string())
    }
}
