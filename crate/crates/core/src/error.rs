use thiserror::Error;

/// Errors produced by the solver, the oracle and the instance reader.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate angle: a ray endpoint coincides with the apex")]
    DegenerateAngle,

    #[error("degenerate triangle: input points are not pairwise distinct")]
    DegenerateTriangle,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("instance contains no terminals")]
    EmptyInstance,

    /// `record` is 1-based: the line number when parsing, the input position otherwise.
    #[error("duplicate terminal position at record {record}")]
    DuplicateTerminal { record: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: weight must be a positive finite number")]
    Weight { line: usize },

    #[error("no crossing-free edge extends the tree ({connected} of {total} vertices connected)")]
    InfeasiblePlaneTree { connected: usize, total: usize },

    #[error("exhaustive search supports at most {cap} terminals, got {got}")]
    CapExceeded { cap: usize, got: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
