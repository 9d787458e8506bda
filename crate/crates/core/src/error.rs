use thiserror::Error;

use crate::report::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("invalid structure: {}", first_message(.0))]
    Structure(Box<Report>),

    #[error("polynomial {poly} did not stabilize within {budget} family members")]
    Unstable { poly: String, budget: usize },

    #[error("explicit family exhausted after {len} members")]
    FamilyExhausted { len: usize },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

fn first_message(report: &Report) -> String {
    report
        .findings
        .first()
        .map(|f| f.message.clone())
        .unwrap_or_else(|| "no findings".to_owned())
}
