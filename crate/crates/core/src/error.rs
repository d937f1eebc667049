use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("inadmissible weight on edge {edge}: {weight}")]
    InadmissibleWeight { edge: usize, weight: String },

    #[error("instance of size {n} exceeds the oracle guard of {limit}")]
    SizeGuard { n: usize, limit: usize },

    #[error("infeasible instance spec: {0}")]
    Infeasible(String),

    /// A Las Vegas stage ran out of restarts; callers fall back to BFD.
    #[error("restart budget of {budget} exhausted in {stage}")]
    RestartBudgetExhausted { stage: &'static str, budget: usize },

    #[error("{0}")]
    Io(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::ContractViolation(msg.into())
}
