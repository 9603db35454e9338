use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parameters do not define a normalizable density: {0}")]
    NonNormalizable(String),
    #[error("integral diverges: {0}")]
    Divergence(String),
    #[error("quadrature did not reach tolerance (best estimate {estimate}, error estimate {error})")]
    Accuracy { estimate: f64, error: f64 },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("degenerate series: {0}")]
    DegenerateSeries(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
