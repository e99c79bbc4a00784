use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |m_ij - conj(m_ji)| = {deviation:e}")]
    HermiticityViolation { deviation: f64 },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("incompatible decoherence method: {0}")]
    Method(String),

    #[error("quadrature did not converge: estimated error {estimate:e} after {subdivisions} subdivisions")]
    Quadrature { estimate: f64, subdivisions: usize },

    #[error("measure is not positive at t = 0; no correlation to preserve")]
    NoCorrelation,

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
