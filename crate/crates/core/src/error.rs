use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain violation: {what} = {value} lies outside [0, {domain_end}]")]
    Domain {
        what: String,
        value: f64,
        domain_end: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sequence `{name}` has {len} terms but {needed} are required")]
    Length {
        name: String,
        needed: usize,
        len: usize,
    },

    #[error("unknown {kind} `{spec}`")]
    Unknown { kind: &'static str, spec: String },

    #[error("cannot parse {kind} `{spec}`: {reason}")]
    Parse {
        kind: &'static str,
        spec: String,
        reason: String,
    },

    #[error(
        "rejection sampling found no sequence satisfying {conditions} after {attempts} attempts"
    )]
    RejectionExhausted { conditions: String, attempts: usize },

    #[error("search budget of {budget} evaluations exhausted without a valid configuration")]
    NoValidConfiguration { budget: usize },

    #[error("I/O error at {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(what: impl Into<String>, value: f64, domain_end: f64) -> Self {
        Error::Domain {
            what: what.into(),
            value,
            domain_end,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(kind: &'static str, spec: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            kind,
            spec: spec.to_string(),
            reason: reason.into(),
        }
    }
}
