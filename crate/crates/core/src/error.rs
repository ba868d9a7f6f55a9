use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: String, found: String },

    #[error("matrix is not Hermitian (max |M - M^dag| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    EigenNotConverged { sweeps: usize },

    #[error("invalid probability table: {0}")]
    InvalidProbabilities(String),

    #[error("invalid local basis: {0}")]
    InvalidBasis(String),

    #[error("measurement outcome has probability {prob:e}")]
    ZeroProbability { prob: f64 },

    #[error("invalid channel spec: {0}")]
    InvalidChannel(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid tomography record: {0}")]
    InvalidRecord(String),

    #[error("{what} did not converge: {detail}")]
    NotConverged { what: &'static str, detail: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn dim(expected: impl ToString, found: impl ToString) -> Self {
        Error::Dimension {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}
