use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count {n} is outside the supported range {min}..={max}")]
    VariableCount { n: usize, min: usize, max: usize },

    #[error("functions have different variable counts ({left} vs {right})")]
    MismatchedVariables { left: usize, right: usize },

    #[error("index {index} is out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("truth table has {actual} entries, expected {expected}")]
    TableLength { expected: usize, actual: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate term {0} in rotation symmetric spec")]
    DuplicateTerm(String),

    #[error("function is not rotation symmetric")]
    NotRotationSymmetric,

    #[error("n = {n} is not twice an odd prime")]
    NotTwicePrime { n: usize },

    #[error("{p} is not an odd prime")]
    NotOddPrime { p: usize },

    #[error("spec is not homogeneous")]
    NotHomogeneous,

    #[error("degree {degree} is below the required minimum {min}")]
    DegreeTooSmall { degree: usize, min: usize },

    #[error("enumeration of {required} instances exceeds the budget of {budget}")]
    Budget { required: u128, budget: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
