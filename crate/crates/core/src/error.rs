use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters supplied by the caller (distribution parameters,
    /// grids, trial counts, ...).
    #[error("configuration error: {0}")]
    Config(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Densification (or any other dense-path operation) refused because the
    /// ambient dimension n^d exceeds the stated limit.
    #[error("size limit exceeded: n^d = {requested} exceeds the dense limit {limit}")]
    SizeLimit { requested: u128, limit: u64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The exact Gaussian chaos MGF only exists for 2|lambda|·max|mu_i| < 1.
    #[error("divergent MGF: 2|lambda|·max|mu| = {product} >= 1 (lambda = {lambda})")]
    DivergentMgf { lambda: f64, product: f64 },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::ShapeMismatch(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
