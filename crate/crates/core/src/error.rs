use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge { what: String, size: usize, limit: usize },

    #[error("graph is not regular (degrees range {min}..={max}); use the almost-regular builder")]
    NotRegular { min: usize, max: usize },

    #[error("co-degree condition fails at i={i}: measured {measured} > bound {bound}")]
    Codegree { i: usize, measured: usize, bound: f64 },

    #[error("refinement unavailable: every edge lies inside some subset")]
    RefinementUnavailable,

    #[error("{stage}: {msg}")]
    Resource { stage: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn too_large(what: impl Into<String>, size: usize, limit: usize) -> Self {
        Error::TooLarge { what: what.into(), size, limit }
    }
}
