use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("matrix is not Hermitian: ||A - A^H|| = {deviation:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not positive semi-definite: most negative eigenvalue {min_eigenvalue:.6e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("pilot Gram matrix is singular at subcarrier {subcarrier}")]
    SingularGram { subcarrier: usize },

    #[error(
        "under-determined pilot system: N_P = {n_p} but at least 2 pilot symbols are required"
    )]
    UnderDetermined { n_p: usize },

    #[error("degenerate covariance: tr(AB) = {trace_ab:.6e} is not positive")]
    DegenerateCovariance { trace_ab: f64 },

    #[error("eigensolver failed to converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
