use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("no primitive {p}-th root of unity in {ring}")]
    NoRootOfUnity { p: u32, ring: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{value} is not invertible in {ring}")]
    NotInvertible { value: String, ring: String },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("size guard: {what} has {size} elements, cap is {cap}")]
    SizeGuard { what: String, size: u128, cap: usize },
    #[error("zero vector has no completion to SL")]
    ZeroVector,
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("algebra context mismatch")]
    ContextMismatch,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("element is not supported in the group: {0}")]
    OutsideGroup(String),
    #[error("ring incompatibility: {0}")]
    RingIncompatible(String),
    #[error("invalid level: {0}")]
    Level(String),
    #[error("unsupported certificate format {found:?} (expected {expected:?})")]
    Version { found: String, expected: String },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}
