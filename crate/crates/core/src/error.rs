use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("resource limit exceeded: {what} (limit {limit})")]
    ResourceLimit { what: &'static str, limit: usize },

    #[error("monomial order mismatch: {0}")]
    OrderMismatch(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no solution within caps (order {order}, degree {degree}); raise caps")]
    CapExhausted { order: u32, degree: u32 },

    #[error("capped space not closed under the differential: {0}; raise caps")]
    CapEscape(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
