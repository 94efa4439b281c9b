use thiserror::Error;

/// Errors raised by the library. The CLI maps them onto exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank n={0} out of range (supported: 1..={max})", max = crate::roots::MAX_RANK)]
    RankOutOfRange(usize),

    #[error("rank mismatch: A_{left} vs A_{right}")]
    RankMismatch { left: usize, right: usize },

    #[error("invalid root {0}")]
    InvalidRoot(String),

    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid precedence: {0}")]
    InvalidPrecedence(String),

    #[error("{0} is not prime")]
    NotPrime(u32),

    #[error("p={p} divides n+1={n_plus_one}; pass the non-standard override to proceed")]
    NonStandardPrime { p: u32, n_plus_one: usize },

    #[error("field mismatch: (p={p1}, n={n1}) vs (p={p2}, n={n2})")]
    FieldMismatch { p1: u32, n1: usize, p2: u32, n2: usize },

    #[error("zero vector has no leading root")]
    ZeroVector,

    #[error("strata overlap at root {0}")]
    StrataOverlap(String),

    #[error("named set {tag} is not defined for A_{n}")]
    ParityMismatch { tag: String, n: usize },

    #[error("unknown named set {0:?}")]
    UnknownNamedSet(String),

    #[error("budget exceeded: {what} needs more than {budget}")]
    BudgetExceeded { what: String, budget: u64 },

    #[error("image leaves u: root {0} is sent to a negative root")]
    ImageOutsideU(String),

    #[error("pivots do not commute: {0} and {1}")]
    NonCommutingPivots(String, String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
