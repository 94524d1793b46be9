use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid site list: {0}")]
    InvalidSites(String),

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("state is not faithful (smallest eigenvalue {0:e})")]
    NotFaithful(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("support of rho is not contained in the support of sigma")]
    SupportViolation,

    #[error("inadmissible q = {q:e}: need 0 < q < {q_max:e}")]
    InadmissibleQ { q: f64, q_max: f64 },

    #[error("enumeration budget exceeded: {0} tuples")]
    BudgetExceeded(u128),

    #[error("dimension {0} exceeds the dense cap of 4096")]
    DimensionOverflow(usize),

    #[error("two-body operator is not centered (residual {0:e})")]
    NotCentered(f64),

    #[error("propagator is numerically singular (condition number {0:e})")]
    SingularPropagator(f64),

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
