use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("expected a {expected} matrix, found dimension {found}")]
    WrongDimension { expected: &'static str, found: usize },

    #[error("matrix is not hermitian: ‖ρ − ρ†‖_F = {defect:.3e} exceeds 1e-10")]
    NotHermitian { defect: f64 },

    #[error("trace {trace:.12} deviates from 1 by more than 1e-10")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:.3e} is below -1e-10")]
    NotPsd { min_eigenvalue: f64 },

    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("measurement direction has norm {norm}, expected 1 within 1e-9")]
    NonUnitVector { norm: f64 },

    #[error("family constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("s = {s} is outside the curve domain [0, 2/3]")]
    OutOfDomain { s: f64 },

    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
}
