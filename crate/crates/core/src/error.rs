use thiserror::Error;

/// Errors surfaced by the library and mapped onto CLI exit codes.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input or an unsupported combination of arguments.
    #[error("usage error: {0}")]
    Usage(String),
    /// The requested model has no closed form for this quantity.
    #[error("unsupported model `{model}`: {what}")]
    UnsupportedModel { model: String, what: &'static str },
    /// A computation would exceed its enumeration or memory budget.
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    /// A cross-check between independent routes disagreed.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::UnsupportedModel { .. } | Error::Io(_) => 1,
            Error::ResourceGuard(_) => 2,
            Error::Verification(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
