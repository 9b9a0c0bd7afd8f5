use thiserror::Error;

/// Violations of the simple-graph invariants or of a vertex-set contract.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex sets are not disjoint (vertex {0} appears in both)")]
    NotDisjoint(usize),
    #[error("vertex sets have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Graph(#[from] GraphError),
    #[error("malformed line: {0}")]
    Malformed(String),
    #[error("header declares {declared} edges but {found} were given")]
    CountMismatch { declared: usize, found: usize },
    #[error("missing \"n m\" header line")]
    MissingHeader,
}

/// Edge-list parse failure, with the 1-based line it was detected on.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("graph has {n} vertices, above the oracle cap of {cap}")]
    OracleCap { n: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("input graph contains a cycle")]
    NotAForest,
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
