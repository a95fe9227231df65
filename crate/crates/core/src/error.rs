use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the region where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative method gave up before reaching its tolerance. `value` is the best
    /// estimate available at that point.
    #[error("numeric error: {msg} (best value {value:e}, error estimate {err_est:e})")]
    Numeric { msg: String, value: f64, err_est: f64 },

    /// Malformed request, such as an unknown identifier or an empty grid.
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
