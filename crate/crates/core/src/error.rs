use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop ({0}, {0}) not allowed in a simple graph")]
    LoopInSimpleGraph(usize),

    #[error("duplicate edge ({0}, {1}) not allowed in a simple graph")]
    DuplicateEdge(usize, usize),

    #[error("vertex set is not connected")]
    NotConnected,

    #[error("vertex set is not a union of connected components (edge ({0}, {1}) leaves it)")]
    NotClosed(usize, usize),

    #[error("vertex {0} is isolated and cannot carry walk mass")]
    IsolatedVertex(usize),

    #[error("component is bipartite (odd cycle absent) and the walk is not lazy; use laziness > 0 or the averaged mixing time")]
    BipartiteNotLazy,

    #[error("distributions have different supports")]
    SupportMismatch,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degree sum {0} is odd")]
    OddDegreeSum(u64),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("structural inconsistency: {0}")]
    Inconsistent(String),

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("total variation increased from {previous} to {current} at step {step}")]
    NonMonotoneTv {
        step: u64,
        previous: f64,
        current: f64,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
