use std::path::PathBuf;

/// Errors surfaced by the engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("duplicate document id `{0}`")]
    DuplicateDocument(String),
    #[error("unknown document `{0}`")]
    UnknownDocument(String),
    #[error("unknown dialog `{0}`")]
    UnknownDialog(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("snapshot format error: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("scorer error on query `{query_id}`: {kind}")]
    Scorer { query_id: String, kind: ScorerFailure },
}

/// What went wrong talking to an external scorer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScorerFailure {
    #[error("timed out after {0} ms")]
    Timeout(u64),
    #[error("protocol violation: {0}")]
    Protocol(String),
    #[error("scorer reported: {0}")]
    Remote(String),
    #[error("transport closed")]
    Closed,
    #[error("transport: {0}")]
    Transport(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
