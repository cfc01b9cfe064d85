use tcone_numerics::NumericsError;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: i64, n: usize },
    #[error("value {modulus} is not of unit modulus")]
    NotUnitModulus { modulus: f64 },
    #[error("input is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("trigonometric polynomial is not real-valued (defect {defect:.3e})")]
    NotRealValued { defect: f64 },
    #[error("trigonometric polynomial is negative somewhere on the circle (min {min_value:.3e})")]
    NotNonnegative { min_value: f64 },
    #[error("the zero polynomial has no spectral factor")]
    ZeroPolynomial,
    #[error("spectral factorization unstable: {0}")]
    FactorizationUnstable(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear map is not adjoint-preserving (defect {defect:.3e})")]
    NotAdjointPreserving { defect: f64 },
    #[error("Gram matrices disagree (defect {defect:.3e})")]
    GramMismatch { defect: f64 },
    #[error("block Toeplitz structure violated (defect {defect:.3e})")]
    BlockStructureViolated { defect: f64 },
    #[error("blocks are not generalized circulants (defect {defect:.3e})")]
    BlocksNotCirculant { defect: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, Error>;
