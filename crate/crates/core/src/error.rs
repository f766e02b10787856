use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid eta: {0}")]
    InvalidEta(String),
    #[error("not a 2-adic integer: {0}")]
    NotTwoAdic(String),
    #[error("argument has odd parity, expected an element of 2Z_2")]
    OddArgument,
    #[error("2-adic precision exhausted")]
    PrecisionExhausted,
    #[error("{0} lies outside the domain of the virtual endomorphism")]
    NotInDomain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed machine: {0}")]
    MalformedMachine(String),
    #[error("fiber of the lamp map has more than one lit position over {0}")]
    FiberViolation(String),
    #[error("base machine must declare a trivial parabolic subgroup")]
    ParabolicRequired,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
