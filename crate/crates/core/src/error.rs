use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("`{field}` must be positive, got {value}")]
    NonPositive { field: &'static str, value: f64 },

    #[error("`{field}` must be non-negative, got {value}")]
    Negative { field: &'static str, value: f64 },

    #[error("`{field}` must be finite")]
    NonFinite { field: &'static str },

    #[error("positions `{a}` and `{b}` coincide")]
    CoincidentPositions { a: &'static str, b: &'static str },

    #[error("user position must lie on the ground plane (z = 0), got z = {0}")]
    UserOffGround(f64),

    #[error("zero-length link: endpoints coincide")]
    ZeroDistance,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NonHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration of {required} phase combinations exceeds the budget of {budget}")]
    BudgetExceeded { required: f64, budget: u64 },

    #[error("configuration: {0}")]
    Config(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by invalid user-supplied parameters.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NonPositive { .. }
                | Error::Negative { .. }
                | Error::NonFinite { .. }
                | Error::CoincidentPositions { .. }
                | Error::UserOffGround(_)
                | Error::ZeroDistance
                | Error::InvalidArgument(_)
                | Error::BudgetExceeded { .. }
                | Error::Config(_)
        )
    }
}
