use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("base {0} is outside 2..=36")]
    InvalidBase(u32),
    #[error("digit count must be at least 1")]
    ZeroDigitCount,
    #[error("value {0} is not a positive finite number")]
    NonPositiveValue(f64),
    #[error("digit {digit} is not valid in base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },
    #[error("a digit tuple must start with a nonzero digit")]
    LeadingZero,
    #[error("{base}^{n_digits} digit categories exceed the supported table size")]
    TooManyCategories { base: u32, n_digits: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("histogram has no included values")]
    EmptyHistogram,
    #[error("reference distribution does not match the histogram layout")]
    ReferenceMismatch,
    #[error("reference probabilities sum to {0}, not 1")]
    ReferenceNotNormalized(f64),
    #[error("category {index} has observations but zero expected probability")]
    ZeroExpected { index: usize },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("could not draw a positive finite value after {attempts} attempts")]
    DegenerateSample { attempts: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: &'static str) -> Self {
        Error::InvalidParameter { name, reason }
    }
}
