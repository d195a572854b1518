use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound")]
    ModulusTooLarge(u64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operands live over different fields (p = {0} vs p = {1})")]
    ModulusMismatch(u64, u64),
    #[error("expected a 2x2 matrix, got {0}x{1}")]
    NotTwoByTwo(usize, usize),

    #[error("generator {0} is singular mod p")]
    SingularGenerator(usize),
    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("exhaustive subgroup enumeration is limited to p <= 5 (got p = {0})")]
    ExhaustiveTooLarge(u64),

    #[error("group is not contained in the canonical torus normalizer")]
    NotInNormalizer,
    #[error("module dimension {0} exceeds the supported maximum of 4")]
    DimTooLarge(usize),
    #[error("modules are defined over different groups")]
    GroupMismatch,
    #[error("module is not a module for this group")]
    GroupModuleMismatch,
    #[error("brute-force search space too large ({0})")]
    TooLarge(String),

    #[error("curve is singular (discriminant 0)")]
    SingularCurve,
    #[error("(c4, c6) are not the invariants of an integral model")]
    NonIntegralModel,
    #[error("minimal models are only computed at primes >= 5 (got {0})")]
    BadPrime(u64),
    #[error("curve does not have good reduction at {0}")]
    BadReduction(u64),
    #[error("twisting parameter {0} is not a nonzero squarefree integer")]
    NotSquarefree(String),
    #[error("exponents ({a},{b}) do not satisfy a + b = 1 mod {modulus}")]
    BadExponents { a: u64, b: u64, modulus: u64 },
    #[error("this operation needs an odd prime (got {0})")]
    EvenPrime(u64),

    #[error("residues at different levels ({0} vs {1})")]
    LevelMismatch(u32, u32),

    #[error("parse error: {0}")]
    Parse(String),
}
