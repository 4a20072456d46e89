use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid GP parameters n={n}, k={k}: {reason}")]
    InvalidParams { n: usize, k: usize, reason: &'static str },

    #[error("graph is not connected")]
    Disconnected,

    #[error("invalid edge {0}-{1}: {2}")]
    InvalidEdge(usize, usize, &'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("cannot parse vertex label `{0}`")]
    BadLabel(String),

    #[error("lemma construction needs k >= 1, got {0}")]
    LemmaParam(usize),

    #[error("no catalog entry for n={0}")]
    NotInCatalog(usize),

    #[error("bad pattern `{text}`: {message}")]
    Pattern { text: String, message: String },

    #[error("invariant violated on {instance}: {message}")]
    Invariant { instance: String, message: String },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
