use thiserror::Error;

/// Errors raised by lattice, root-system, algebra and moduli operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid surface kind: {0}")]
    InvalidKind(String),

    #[error("length mismatch: expected {expected} coefficients, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("class {0} is not a (-2)-class")]
    NotARoot(String),

    #[error("operation `{op}` requires family {expected}, got {found}")]
    WrongFamily {
        op: &'static str,
        expected: &'static str,
        found: String,
    },

    #[error("{what} exceeds the cap of {cap}")]
    CapExceeded { what: String, cap: u64 },

    #[error("classification failed: {0}")]
    Classification(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("{0} is not a {1}-torsion point")]
    InvalidTorsion(String, u64),

    #[error("points do not sum to zero (sum is {0})")]
    SumNotZero(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
