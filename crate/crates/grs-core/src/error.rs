use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the toolkit.
///
/// `EngineMismatch` is special: it means two independent distance engines
/// disagreed on the same input, which is always a bug, never a user error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field order {q} exceeds the table-backed maximum {max}")]
    OrderTooLarge { q: u128, max: u64 },

    #[error("modulus {0} is reducible")]
    ModulusReducible(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("duplicate abscissa: element {0}")]
    DuplicateAbscissa(u64),

    #[error("dimension k={k} out of range for length n={n}")]
    DimensionOutOfRange { k: usize, n: usize },

    #[error("message degree {deg} exceeds the maximum k-1={max}")]
    DegreeTooHigh { deg: usize, max: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("search space of {required} items exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("distance engines disagree: {0}")]
    EngineMismatch(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid witness set: {0}")]
    InvalidWitnessSet(String),

    #[error("io: {0}")]
    Io(String),
}
