use std::io;

use crate::AgentId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A numeric argument fell outside the domain of the function it was passed to.
    #[error("{name} = {value} is outside its domain: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("trust weights must satisfy wg_a + wg_b = 1 with both in [0, 1] (got wg_a = {wg_a}, wg_b = {wg_b})")]
    Weights { wg_a: f64, wg_b: f64 },

    #[error("invalid agent record for {agent}: {reason}")]
    Record { agent: AgentId, reason: String },

    #[error("agent {0} cannot rate itself")]
    SelfRating(AgentId),

    #[error("timestamp regression for ({rater}, {ratee}): t = {got} after t = {last}")]
    TimestampRegression {
        rater: AgentId,
        ratee: AgentId,
        last: u64,
        got: u64,
    },

    #[error("unknown agent {0}")]
    UnknownAgent(AgentId),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("{field}: {message}")]
    Validation { field: String, message: String },

    #[error("malformed input at line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for failures of the filesystem rather than of the data.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
