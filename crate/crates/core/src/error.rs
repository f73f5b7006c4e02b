use thiserror::Error;

/// Errors raised by topology construction, dynamics, oracles and estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("vertex {vertex} out of range (topology has {count} vertices)")]
    InvalidVertex { vertex: usize, count: usize },

    #[error("configuration length {got} does not match vertex count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("target {target} is not defined on {family} topologies")]
    TargetMismatch { target: String, family: String },

    #[error("bracket violation: estimate at p_lo={p_lo} is {est_lo}, at p_hi={p_hi} is {est_hi}, target {target}")]
    Bracket {
        p_lo: f64,
        p_hi: f64,
        est_lo: f64,
        est_hi: f64,
        target: f64,
    },

    #[error("scan cell {index} (p={p}, r={r}): {source}")]
    Cell {
        index: usize,
        p: f64,
        r: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("unknown lemma id: {0}")]
    UnknownLemma(String),

    #[error("record error: {0}")]
    Record(String),
}

pub type Result<T> = std::result::Result<T, Error>;
