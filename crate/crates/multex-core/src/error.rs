use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for n = {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    /// A parameter violated a stated precondition; `name` identifies the
    /// hypothesis so callers (and the CLI) can report exactly what failed.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// `n < s` leaves the constraint set empty, so the product can be made
    /// arbitrarily large; the search refuses such instances.
    #[error("unbounded search instance: n = {n} < s = {s}, no s-set constrains the weights")]
    Unbounded { n: usize, s: usize },

    #[error("malformed edge list: {0}")]
    EdgeListParse(String),

    #[error("cache I/O failed: {0}")]
    CacheIo(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
