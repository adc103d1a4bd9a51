use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} is outside 1..={vertex_count}")]
    InvalidVertex { vertex: usize, vertex_count: usize },

    #[error("invalid edge {{{0}, {1}}}")]
    InvalidEdge(usize, usize),

    #[error("graphs are limited to {max} vertices, got {got}")]
    TooManyVertices { got: usize, max: usize },

    #[error("ambient dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation is undefined on the zero ideal")]
    ZeroIdeal,

    #[error("operation is undefined on the unit ideal")]
    UnitIdeal,

    #[error("ideal is not squarefree")]
    NotSquarefree,

    #[error("graph has a bipartite connected component")]
    BipartiteComponent,

    #[error("graph has no edges")]
    NoEdges,

    #[error("first graph is not bipartite")]
    NotBipartite,

    #[error("invalid power {0}; powers start at 1")]
    InvalidPower(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid corpus spec: {0}")]
    InvalidSpec(String),

    #[error("theorem violation: {0}")]
    Violation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
