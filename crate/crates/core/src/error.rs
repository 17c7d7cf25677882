use crate::geom::Vec2;
use thiserror::Error;

/// Errors shared across the crate. Parse-level problems (dangling ids,
/// malformed structure) are kept distinct from validation failures, which are
/// reported through `ValidationReport` instead.
#[derive(Debug, Error)]
pub enum DimerError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("model failed validation: {0}")]
    Invalid(String),

    #[error("operation requires a consistent dimer model: {0}")]
    Inconsistent(String),

    #[error("degenerate model: {0}")]
    Degenerate(String),

    #[error("rewrite class exceeded the exploration cap of {cap} paths")]
    BoundedExploration { cap: usize },

    #[error("window of {window} steps is too small; need at least {needed}")]
    WindowTooSmall { window: usize, needed: usize },

    #[error("{0} is not a vertex of the Newton polygon")]
    NotAPolygonVertex(Vec2),

    #[error("removing {0} would leave a degenerate polygon")]
    PolygonWouldDegenerate(Vec2),

    #[error("invalid choice: {0}")]
    BadChoice(String),

    #[error("hirzebruch-jung parameters out of range: {0}")]
    HjDomain(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, DimerError>;
