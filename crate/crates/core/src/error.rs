use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("quadrature failed to converge: estimated error {error:.3e} after {intervals} intervals")]
    Quadrature { error: f64, intervals: usize },

    #[error("correlators admit no positive density matrix (max λ_min = {max_min_eigenvalue:.3e})")]
    InconsistentCorrelators { max_min_eigenvalue: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("closed form requires a symmetric-state correlator set")]
    ClosedFormNeedsSymmetric,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
