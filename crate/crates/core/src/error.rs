use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be an odd prime, got {0}")]
    EvenOrTooSmall(u64),
    #[error("prime {0} is too large for a dense discrete-log table")]
    TooLarge(u64),
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),
    #[error("embedding index {k} is not coprime to the conductor {n}")]
    NotCoprime { k: i64, n: u64 },
    #[error("Gauss-Jacobi identity needs a, b and a+b all nontrivial (a={a}, b={b}, p={p})")]
    DegenerateCharacters { p: u64, a: u64, b: u64 },
    #[error("p={p} is a prime of bad reduction for {curve}")]
    BadReduction { p: u64, curve: String },
    #[error("character sum for {curve} at p={p} did not reduce to a rational integer")]
    NonIntegerResult { p: u64, curve: String },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("no contributing characters for d={d} at p={p}")]
    NoColumns { p: u64, d: u32 },
    #[error("vector of length {len} is not in the kernel of the {rows}x{cols} carry matrix")]
    NotInKernel {
        len: usize,
        rows: usize,
        cols: usize,
    },
    #[error("primes disagree on the identity component: {0}")]
    InconsistentAcrossPrimes(String),
    #[error("kernel vector {index} at p={p} is not a relation up to finite order")]
    RelationVerificationFailed { p: u64, index: usize },
    #[error("carry matrix at p={p} fails {count} structural checks")]
    InvalidMatrix { p: u64, count: usize },
    #[error("no generic prime found below {0}")]
    NoGenericPrime(u64),
    #[error("genus {0} is odd; this splitting needs an even genus >= 2")]
    OddInput(u32),
    #[error("genus {0} must be odd and at least 3")]
    EvenInput(u32),
    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(u32),
    #[error("integer overflow while converting {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
