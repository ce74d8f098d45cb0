use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// The result is not representable (overflow or underflow to an unusable value).
    #[error("range error in {func}: {detail}")]
    Range { func: &'static str, detail: String },

    /// An iteration or quadrature failed to reach the requested accuracy.
    #[error("numerical failure in {func}: {detail}")]
    Numerical { func: &'static str, detail: String },

    /// The request is valid but outside what this implementation evaluates.
    #[error("unsupported in {func}: {detail}")]
    Capability { func: &'static str, detail: String },

    /// A parameter record violates one of its invariants.
    #[error("invalid parameter `{field}`: {detail}")]
    InvalidParameter { field: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { func, detail: detail.into() }
    }

    pub(crate) fn range(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Range { func, detail: detail.into() }
    }

    pub(crate) fn numerical(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical { func, detail: detail.into() }
    }

    pub(crate) fn capability(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Capability { func, detail: detail.into() }
    }

    pub(crate) fn param(field: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidParameter { field, detail: detail.into() }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical { .. } | Error::Range { .. })
    }
}
