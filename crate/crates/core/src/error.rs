use thiserror::Error;

/// Every failure the library can report.
///
/// `Parse` and `Schema` are input-format problems; the remaining variants
/// are computation or precondition failures on well-formed input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }

    /// True for malformed input, as opposed to a failed computation.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Schema(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Schema(_) => "schema",
            Error::Validation(_) => "validation",
            Error::Dimension(_) => "dimension",
            Error::Precondition(_) => "precondition",
            Error::Invariant(_) => "invariant",
        }
    }

    /// The message without the kind prefix.
    pub fn reason(&self) -> String {
        match self {
            Error::Parse { location, message } => format!("{location}: {message}"),
            Error::Validation(v) => v.join("; "),
            Error::Schema(m) | Error::Dimension(m) | Error::Precondition(m) | Error::Invariant(m) => m.clone(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
