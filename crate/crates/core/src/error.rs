use thiserror::Error;

/// Errors raised by the core library.
///
/// [`Error::is_verification_failure`] separates mathematical verification
/// failures (which indicate a bug somewhere upstream) from bad input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("{p}^{n} does not fit in 63 bits")]
    Overflow { p: u64, n: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("even characteristic is not supported here")]
    EvenCharacteristic,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("point counts violate the Weil bound at m = {m}")]
    WeilBound { m: usize },
    #[error("non-integral value in {what} at index {index}")]
    NonIntegral { what: &'static str, index: usize },
    #[error("functional equation fails at index {index}")]
    FunctionalEquation { index: usize },
    #[error("evaluation at a pole: u = {0}")]
    PoleAt(String),
    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("inverse zero off the critical circle by {deviation:e}")]
    RhViolation { deviation: f64 },
    #[error("repeated inverse zeros, multiplicities {multiplicities:?}")]
    NonSimpleZeros { multiplicities: Vec<usize> },
    #[error("oscillatory sum has imaginary part {imag:e} at X = {x}")]
    ImaginaryResidue { x: u64, imag: f64 },
    #[error("X = {x} outside table range 1..={max}")]
    OutOfRange { x: usize, max: usize },
    #[error("residual not constant: max deviation {max_dev:e} around {epsilon:e}")]
    NonConstantResidual { epsilon: f64, max_dev: f64 },
    #[error("|z| = {0} exceeds the J0 series domain")]
    DomainTooLarge(f64),
    #[error("genus {0} too large for rejection sampling")]
    GenusTooLarge(usize),
    #[error("repeated angle at spectrum index {index}")]
    RepeatedAngle { index: usize },
    #[error("family of size {size} exceeds the enumeration cap")]
    FamilyTooLarge { size: u128 },
    #[error("field of size {size} too large for exhaustive point counting")]
    CountTooLarge { size: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of a mathematical consistency check, as opposed to
    /// rejected input.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            Error::NonIntegral { .. }
                | Error::FunctionalEquation { .. }
                | Error::WeilBound { .. }
                | Error::NoConvergence { .. }
                | Error::RhViolation { .. }
                | Error::ImaginaryResidue { .. }
                | Error::NonConstantResidual { .. }
        )
    }

    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPrime(_) => "NonPrime",
            Error::Overflow { .. } => "Overflow",
            Error::FieldMismatch => "FieldMismatch",
            Error::DivisionByZero => "DivisionByZero",
            Error::EvenCharacteristic => "EvenCharacteristic",
            Error::InvalidCurve(_) => "InvalidCurve",
            Error::Parse(_) => "Parse",
            Error::WeilBound { .. } => "WeilBound",
            Error::NonIntegral { .. } => "NonIntegral",
            Error::FunctionalEquation { .. } => "FunctionalEquation",
            Error::PoleAt(_) => "PoleAt",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::RhViolation { .. } => "RHViolation",
            Error::NonSimpleZeros { .. } => "NonSimpleZeros",
            Error::ImaginaryResidue { .. } => "ImaginaryResidue",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::NonConstantResidual { .. } => "NonConstantResidual",
            Error::DomainTooLarge(_) => "DomainTooLarge",
            Error::GenusTooLarge(_) => "GenusTooLarge",
            Error::RepeatedAngle { .. } => "RepeatedAngle",
            Error::FamilyTooLarge { .. } => "FamilyTooLarge",
            Error::CountTooLarge { .. } => "CountTooLarge",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
