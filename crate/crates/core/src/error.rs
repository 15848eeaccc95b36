use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cover relation contains a cycle through {0} and {1}")]
    CycleDetected(usize, usize),
    #[error("element index {index} out of range for a poset of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("relation is not a partial order: {0}")]
    NotAPartialOrder(String),
    #[error("expected {expected} blocks, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("input set is empty")]
    EmptyInput,
    #[error("sets belong to different hosts")]
    HostMismatch,
    #[error("host has {0} elements; set-valued constructions support at most 64")]
    HostTooLarge(usize),
    #[error("budget exceeded: {what} (limit {limit})")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("map is not order preserving: {0} <= {1} but images are not ordered")]
    NotMonotone(usize, usize),
    #[error("families do not form a pregap: {0}")]
    NotAPregap(String),
    #[error("precondition cannot hold: {0}")]
    PreconditionUnsatisfiable(String),
    #[error("maps do not form a retraction: {0}")]
    NotARetraction(String),
    #[error("not a lattice: {x} and {y} have {reason}")]
    NotALattice { x: usize, y: usize, reason: &'static str },
    #[error("sequence condition ({0}) violated")]
    ConditionViolated(&'static str),
    #[error("invalid congruence: {0}")]
    InvalidCongruence(String),
    #[error("sets do not form an ascending chain at position {0}")]
    NotAChain(usize),
    #[error("invalid parts for selection transfer: {0}")]
    InvalidParts(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
    #[error("unknown example key `{0}`")]
    UnknownKey(String),
    #[error("bad parameters for `{key}`: {msg}")]
    BadParams { key: String, msg: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
