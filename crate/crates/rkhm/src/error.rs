use thiserror::Error;

/// Errors shared by the algebra, kernel, and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid kernel spec: {0}")]
    InvalidSpec(String),

    #[error("input does not conform to the kernel's input space: {0}")]
    InputMismatch(String),

    #[error("element is not positive: {0}")]
    NotPositive(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular system in {context}: pivot magnitude {pivot:.3e}{}", frequency.map(|f| format!(" at frequency {f}")).unwrap_or_default())]
    Singular {
        context: &'static str,
        pivot: f64,
        frequency: Option<usize>,
    },

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("solver precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
