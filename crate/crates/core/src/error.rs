use thiserror::Error;

/// Errors raised by the numerical kernels and the verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("not Hermitian: |X - X^dag|_F = {0:e}")]
    NotHermitian(f64),

    #[error("not positive semidefinite: minimum eigenvalue {0:e}")]
    NotPsd(f64),

    #[error("trace is not one: |tr - 1| = {0:e}")]
    Trace(f64),

    #[error("not unitary: |U^dag U - I|_F = {0:e}")]
    NotUnitary(f64),

    #[error("completeness violated: |sum - I|_F = {0:e}")]
    Completeness(f64),

    #[error("invalid probability vector: {0}")]
    Probability(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("unsupported entropy kind: {0}")]
    UnsupportedKind(String),

    #[error("eigensolver did not converge")]
    EigenSolver,
}

impl Error {
    /// Short machine-readable name of the violated invariant.
    pub fn invariant(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Domain(_) => "domain",
            Error::NonFinite => "finite-entries",
            Error::NotHermitian(_) => "hermitian",
            Error::NotPsd(_) => "positive-semidefinite",
            Error::Trace(_) => "unit-trace",
            Error::NotUnitary(_) => "unitary",
            Error::Completeness(_) => "completeness",
            Error::Probability(_) => "probability-vector",
            Error::Degenerate(_) => "non-degenerate-probabilities",
            Error::Resolution(_) => "quadrature-resolution",
            Error::UnsupportedKind(_) => "entropy-kind",
            Error::EigenSolver => "eigensolver-convergence",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
