use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("eigensolver did not converge")]
    ConvergenceFailure,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("unsupported subsystem dimension {0}")]
    UnsupportedDimension(usize),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("invalid density matrix: {0}")]
    InvalidState(String),
    #[error("spectrum must be strictly increasing")]
    InvalidSpectrum,
    #[error("parameter `{name}` = {value} outside {range}")]
    ParamOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("p1 + p2 = {0} exceeds 1")]
    ExcitationBudgetExceeded(f64),
    #[error("post-selection probability {0:e} below threshold")]
    ZeroSuccessProbability(f64),
}
