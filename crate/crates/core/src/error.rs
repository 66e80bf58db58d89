use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{k} exceeds the cap of 2^20 elements")]
    DegreeTooLarge { p: u64, k: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("invalid field element: {0}")]
    InvalidElement(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("frobenius iterate {i} out of range for extension degree {k}")]
    IterateOutOfRange { i: u32, k: u32 },
    #[error("{base} does not divide extension degree {degree}")]
    NotADivisor { base: u32, degree: u32 },
    #[error("not a subfield: {0}")]
    NotASubfield(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("the generator `g` is not available in a prime field")]
    GeneratorInPrimeField,
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("polynomial system is empty")]
    EmptySystem,
    #[error("objects live over different fields or ambient spaces")]
    FieldMismatch,
    #[error("subspace ambient dimension {subspace} does not match {expected}")]
    AmbientMismatch { expected: usize, subspace: usize },
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("point set is empty")]
    EmptySet,
    #[error("subspace is the whole ambient space")]
    FullSpace,
    #[error("work of {needed} exceeds budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("wrong field size: {0}")]
    WrongFieldSize(String),
    #[error("field too small: {0}")]
    FieldTooSmall(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("need at least two extension degrees to estimate growth")]
    InsufficientExtensions,
    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn budget(needed: u128, budget: u128) -> Result<()> {
        if needed > budget {
            Err(Error::BudgetExceeded { needed, budget })
        } else {
            Ok(())
        }
    }
}
