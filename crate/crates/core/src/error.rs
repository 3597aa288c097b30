use thiserror::Error;

/// Errors raised by the algebra, construction and verification layers.
///
/// Verification *failures* (a set that is not mubent, a family that is not
/// unbiased) are not errors; they are reported through the report types.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported modulus {0}: expected a prime or 4")]
    UnsupportedModulus(u32),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("value {value} out of range for modulus {modulus}")]
    ValueOutOfRange { value: i64, modulus: u32 },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("operation requires a prime modulus, got {0}")]
    NonPrimeModulus(u32),

    #[error("operation requires an odd prime, got {0}")]
    EvenCharacteristic(u32),

    #[error("operation requires characteristic 2, got {0}")]
    OddCharacteristic(u32),

    #[error("the zero vector is not a valid direction")]
    ZeroDirection,

    #[error("no field modulus for GF({p}^{n}) in the field table")]
    MissingField { p: u32, n: usize },

    #[error("invalid field modulus for GF({p}^{n}): {reason}")]
    InvalidFieldModulus { p: u32, n: usize, reason: String },

    #[error("field table parse error on line {line}: {reason}")]
    FieldTableParse { line: usize, reason: String },

    #[error("search budget of {budget} candidates exhausted")]
    BudgetExhausted { budget: u64 },

    #[error("phase encoding mismatch: {0}")]
    EncodingMismatch(String),

    #[error("invalid spread set: {0}")]
    InvalidSpreadSet(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
