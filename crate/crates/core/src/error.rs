use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("invalid correlation matrix: {0}")]
    InvalidCorrelation(String),

    #[error("standard deviation at index {index} must be positive, got {value}")]
    InvalidSigma { index: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("numerical procedure did not converge: {0}")]
    Nonconvergence(String),

    #[error("group `{group}` has {size} observation(s); at least 2 are required")]
    DegenerateGroup { group: String, size: usize },

    #[error("number of groups must be at least 2, got {0}")]
    InvalidK(usize),

    #[error("fits disagree on the group structure: {0}")]
    MixedDesign(String),

    #[error("singular design: {0}")]
    SingularDesign(String),

    #[error("endpoint partition does not cover hypotheses 0..{0} exactly once")]
    PartitionMismatch(usize),

    #[error("J = {0} is outside the supported range 1..=20")]
    JTooLarge(usize),

    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: String, reason: String },
}

impl Error {
    pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}
