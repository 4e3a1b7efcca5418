use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("not a subgraph: {0}")]
    NotSubgraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("weights must be positive integers: {0}")]
    NonIntegralWeights(String),

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("table entry ({s}, {t}, {len}) is not realizable")]
    Unrealizable { s: usize, t: usize, len: u64 },

    #[error("dynamic programming table needs {required} cells per vertex pair, cap is {cap}")]
    CellCapExceeded { required: u128, cap: u64 },

    #[error("oracle search space has {free_edges} undecided edges, cap is {cap}")]
    OracleCapExceeded { free_edges: usize, cap: usize },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid SAT instance: {0}")]
    InvalidSat(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
