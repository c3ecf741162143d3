use thiserror::Error;

/// Errors raised by field arithmetic, function tables, spectra and the
/// equivalence machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field degree m={0} (expected 2 <= m <= 32)")]
    UnsupportedDegree(u32),
    #[error("polynomial {poly:#x} has degree {found}, expected {expected}")]
    WrongPolyDegree { poly: u64, expected: u32, found: u32 },
    #[error("polynomial {0:#x} is reducible over F_2")]
    RejectsReducible(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{n} does not divide m={m}")]
    NotADivisor { n: u32, m: u32 },
    #[error("exponent {e} is not invertible modulo 2^{m}-1")]
    NotInvertible { e: u64, m: u32 },
    #[error("operands live in different fields")]
    ContextMismatch,
    #[error("table length {found} does not match 2^m = {expected}")]
    BadTableLength { expected: usize, found: usize },
    #[error("table entry {value:#x} at index {index} is not a field element")]
    BadTableEntry { index: usize, value: u64 },
    #[error("function is not a permutation")]
    NotAPermutation,
    #[error("m={m} exceeds the limit {limit} for this computation")]
    TooLarge { m: u32, limit: u32 },
    #[error("m + s must be even (m={m}, s={s})")]
    ParityMismatch { m: u32, s: u32 },
    #[error("linear map is singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    WrongDimension { expected: u32, found: u32 },
    #[error("polynomial is not linearized (exponent {0} is not a power of two)")]
    NotLinearized(u64),
    #[error("linear map does not have full rank")]
    RankDeficient,
    #[error("gcd(i, m) must be 1 (i={i}, m={m})")]
    GcdViolation { i: u32, m: u32 },
    #[error("m must be even (m={0})")]
    OddDegree(u32),
    #[error("exhaustive search is limited to m <= 5; a budget is required for m={0}")]
    BudgetRequired(u32),
    #[error("condition violated: {0}")]
    ConditionViolated(String),
    #[error("parity violated: {0}")]
    ParityViolated(String),
    #[error("divisibility violated: {0}")]
    DivisibilityViolated(String),
    #[error("element must be nonzero")]
    ZeroElement,
    #[error("malformed input at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
