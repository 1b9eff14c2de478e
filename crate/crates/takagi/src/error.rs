use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("the zero polynomial has no roots")]
    ZeroPolynomial,

    #[error("undefined multiplicity: the zero polynomial has no origin multiplicity")]
    UndefinedMultiplicity,

    #[error("root finding failed the residual contract (worst residual {worst_residual:.3e}, allowed {allowed:.3e})")]
    RootFinding {
        /// Best iterates found before giving up.
        roots: Vec<Complex64>,
        residuals: Vec<f64>,
        worst_residual: f64,
        allowed: f64,
    },

    #[error("empty region has no signed distance")]
    EmptyRegion,

    #[error("certificate undefined at zero of g")]
    CertificateAtRoot,

    #[error("alpha must be nonzero")]
    ZeroAlpha,

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
