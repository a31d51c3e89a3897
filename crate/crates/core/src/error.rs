use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
///
/// `Domain` covers operation arguments outside their mathematical domain
/// (a quantile level outside `(0,1]`, a norm exponent below 1).
/// `Validation` covers measure-spec invariant breaches and names the
/// violated constraint. `Parse` carries a JSON path into the offending
/// part of a spec document.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {constraint}")]
    Validation { constraint: String },

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("duality error: {0}")]
    Duality(String),

    #[error("calibration error: {0}")]
    Calibration(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn validation(constraint: impl Into<String>) -> Self {
        Error::Validation {
            constraint: constraint.into(),
        }
    }

    pub fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
