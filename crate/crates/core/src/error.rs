use thiserror::Error;

/// Errors raised by field construction, code construction and the decoders.
///
/// Decoding failure is not an error: decoders report it as `None`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("base field order {p}^{r} exceeds the supported maximum of 256")]
    BaseFieldTooLarge { p: u64, r: usize },
    #[error("extension degree {m} is unsupported (need 1 <= m <= 64 and q^m < 2^64)")]
    ExtensionTooLarge { m: usize },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("number of blocks {ell} exceeds q - 1 = {max}")]
    TooManyBlocks { ell: usize, max: usize },
    #[error("block length {eta} exceeds extension degree m = {m}")]
    BlockTooLong { eta: usize, m: usize },
    #[error("code needs at least one block of positive length")]
    EmptyCode,
    #[error("dimension k = {k} must satisfy 1 <= k <= n = {n}")]
    InvalidDimension { k: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix has rank {got}, expected full rank {expected}")]
    RankDeficient { expected: usize, got: usize },
    #[error("weight composition infeasible: {0}")]
    InfeasibleComposition(String),
    #[error("message polynomial degree {degree} is not below k = {k}")]
    DegreeTooLarge { degree: usize, k: usize },
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("row erasures are not supported by this decoder")]
    UnsupportedRowErasures,
    #[error("decoding radius {t_max} too large: 2*t_max must not exceed {redundancy}")]
    RadiusTooLarge { t_max: usize, redundancy: usize },
    #[error("support profiles are not comparable: {0}")]
    SupportMismatch(String),
    #[error("invalid guessing distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
