use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HgmError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of size {p}^{r} exceeds the table limit of {limit} elements")]
    TooLarge { p: u64, r: u32, limit: u64 },
    #[error("zero has no discrete logarithm")]
    ZeroElement,
    #[error("element {0} is not a multiplicative generator")]
    NotGenerator(u32),
    #[error("denominator {den} does not divide q - 1 = {q_minus_1}")]
    BadDenominator { den: u64, q_minus_1: u64 },
    #[error("t must be nonzero")]
    ZeroT,
    #[error("t must avoid 0 and 1")]
    BadT,
    #[error("parameters are degenerate")]
    Degenerate,
    #[error("parameters are not isotypically degenerate")]
    NotIsotypic,
    #[error("{d} does not divide {n}")]
    NotDivisor { d: u64, n: u64 },
    #[error("gcd(m, q) != 1 for m = {m}, q = {q}")]
    BadCharacteristic { m: u64, q: u64 },
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u64, reason: String },
    #[error("value {re} + {im}i (err {err}) does not snap to an integer")]
    SnapFailure { re: f64, im: f64, err: f64 },
    #[error("zeta series disagrees with the factor product at order {order}: counts give {expected}, factors give {got}")]
    SeriesMismatch { order: usize, expected: String, got: String },
    #[error("rising factorial of {param} vanishes at k = {k}")]
    PoleInCoefficient { param: String, k: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HgmError>;
