use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u64 },
    #[error("modulus must be monic of degree {expected}, got {got} coefficients")]
    DegreeMismatch { expected: u32, got: usize },
    #[error("field of order {p}^{s} does not fit the 63-bit element encoding")]
    FieldTooLarge { p: u64, s: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("{0} is not a canonical element encoding for this field")]
    NotCanonical(u64),
    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields")]
    MixedFields,
    #[error("divisor is the zero polynomial")]
    DivisorZero,
    #[error("gcrd of two zero polynomials is undefined")]
    BothZero,

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("pattern has {rows} rows, above the exhaustive bound of {bound}")]
    PatternTooLarge { rows: usize, bound: usize },
    #[error("pattern violates the feasibility condition for rows {omega:?}")]
    Infeasible { omega: Vec<usize> },
    #[error("internal stall: {0}")]
    InternalStall(String),
    #[error("invalid bipartite graph: {0}")]
    InvalidGraph(String),
    #[error("neighborhood inequality violated for {omega:?}")]
    PreconditionViolated { omega: Vec<usize> },

    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("pattern rows must have exactly k-1 zeros; row {row} has {size}")]
    PatternNotNormalized { row: usize, size: usize },
    #[error("evaluation points are linearly dependent over the base field")]
    DependentAlphas,
    #[error("extension degree {s} is below the required {required}")]
    FieldTooSmall { s: u32, required: u32 },
    #[error("no valid evaluation points found after {0} attempts")]
    AttemptsExhausted(u64),
    #[error("exhaustive enumeration over {0} tuples exceeds the limit")]
    EnumerationTooLarge(u128),

    #[error("matrix too small: {0}")]
    DimensionTooSmall(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("golden mismatch: {0}")]
    GoldenMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
