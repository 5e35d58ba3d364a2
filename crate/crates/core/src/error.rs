use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("composite of consecutive maps is nonzero")]
    NotAComplex,
    #[error("empty bracket sequence")]
    EmptySequence,
    #[error("p = {0} is outside the supported range for this operation")]
    UnsupportedPrime(u32),
    #[error("(ad e_{0})^p is not inner")]
    NotRestrictable(usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("{what} has size {size}, above the bound {bound}")]
    TooLarge { what: String, size: u64, bound: u64 },
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("modules belong to different algebras")]
    MixedAlgebras,
    #[error("algebra is not abelian")]
    NotAbelian,
    #[error("degree {degree} requires a larger prime (p = {p})")]
    DegreeTooHigh { degree: usize, p: u32 },
    #[error("degree {0} is not available for this complex")]
    UnsupportedDegree(usize),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("coefficient algebra is not strongly abelian")]
    NotStronglyAbelian,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),
    #[error("duplicate {0}")]
    DuplicateLabel(String),
    #[error("unresolved reference: {0}")]
    UnresolvedReference(String),
}

pub type Result<T> = std::result::Result<T, Error>;
