use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no admissible collection exists for this spec")]
    AdmissibleEmpty,
    #[error("protocol violation: {0}")]
    ProtocolViolation(String),
    #[error("no admissible collection matches the final sets")]
    RealizabilityViolation,
    #[error("no collection is consistent with the revealed labels")]
    EmptyConsistentSet,
    #[error("budget exceeded: {what} needs more than {limit}")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("measure grid has {size} points, budget is {limit}")]
    GridTooLarge { size: u64, limit: u64 },
    #[error("shattering tree does not match the spec: {0}")]
    TreeSpecMismatch(String),
    #[error("instance pool exhausted at round {0}")]
    PoolExhausted(usize),
    #[error("no label with mass at most {0} is available")]
    LabelPoolExhausted(String),
    #[error("intersection rule produced an empty set")]
    EmptyIntersection,
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}
