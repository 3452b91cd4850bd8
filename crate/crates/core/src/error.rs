use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {field} = {value} ({reason})")]
    Domain {
        field: String,
        value: f64,
        reason: String,
    },
    #[error("pole: {0}")]
    Pole(String),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("hierarchy violation: {0}")]
    Hierarchy(String),
    #[error("contact point: {0}")]
    Contact(String),
    #[error("degenerate contact: {0}")]
    DegenerateContact(String),
    #[error("higher-order slow flow: {0}")]
    HigherOrder(String),
    #[error("blown-up locus: {0}")]
    Locus(String),
    #[error("stiffness: {0}")]
    Stiffness(String),
    #[error("no cycle: {0}")]
    NoCycle(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("unknown {kind} '{id}'; valid ids: {valid}")]
    UnknownId {
        kind: &'static str,
        id: String,
        valid: String,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error("verification mismatch: {0}")]
    Verify(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(field: impl Into<String>, value: f64, reason: impl Into<String>) -> Self {
        Error::Domain {
            field: field.into(),
            value,
            reason: reason.into(),
        }
    }
}
