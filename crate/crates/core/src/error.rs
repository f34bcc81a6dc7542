use thiserror::Error;

/// Errors raised by graph construction, parsing and the identification engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("node index {0} is not part of this graph")]
    UnknownIndex(usize),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("graph contains a cycle: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("graph declares no nodes")]
    EmptyGraph,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("`{0}` is unobservable")]
    NotObservable(String),
    #[error("sets must be pairwise disjoint ({0})")]
    Overlap(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A quotient hit a zero denominator. Carries the offending `(node index, value)` pairs.
    #[error("zero denominator (positivity violation) under assignment {assignment:?}")]
    Positivity { assignment: Vec<(usize, usize)> },
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("malformed json: {0}")]
    Json(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
