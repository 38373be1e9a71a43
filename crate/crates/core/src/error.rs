use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not a supported prime (need an odd prime 3 < p < 2^32)")]
    InvalidPrime(u64),

    #[error("monomial index {index} out of range (basis has {len} elements)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid multi-index: {0}")]
    InvalidMultiIndex(String),

    #[error("linear form is identically zero")]
    ZeroForm,

    #[error("term weight is zero")]
    ZeroWeight,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degree {got} not supported here: {reason}")]
    UnsupportedDegree { got: usize, reason: &'static str },

    #[error("rank budget exceeded: r(n+1) = {needed} exceeds the {available} monomials of degree d")]
    RankBudgetExceeded { needed: usize, available: usize },

    #[error("flattening order k = {k} out of range 1..={max}")]
    FlatteningOrder { k: usize, max: usize },

    #[error("wedge degree a = {a} out of range 1..={n}")]
    WedgeDegree { a: usize, n: usize },

    #[error("FLATTENING_RANK_DEFICIENT: flattening rank {rank} differs from r = {expected}")]
    FlatteningRankDeficient { rank: usize, expected: usize },

    #[error("SUPERGENERIC_RANK: r = {r} is not strictly below binom(n+d,d)/(n+1) = {monomials}/{parts}")]
    SupergenericRank { r: usize, monomials: usize, parts: usize },

    #[error("no contact equations: the tangent span fills the ambient space")]
    NoContactEquations,

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown case {name:?}; valid names: {valid}")]
    UnknownCase { name: String, valid: String },

    #[error("parse error in `{field}`: {message}")]
    Parse { field: String, message: String },
}
