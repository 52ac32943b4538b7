//! Crate-wide error with a validation/assertion split.

use thiserror::Error;

use crate::cartan_weyl::WeylError;
use crate::dimvec::DimvecError;
use crate::interval::IntervalError;
use crate::laurent::LaurentError;
use crate::minors::MinorError;
use crate::quiver_seed::SeedError;
use crate::shuffle::ShuffleError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad input.
    Validation,
    /// An engine invariant failed on valid input.
    Assertion,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Seed(#[from] SeedError),
    #[error(transparent)]
    Dimvec(#[from] DimvecError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
    #[error(transparent)]
    Minor(#[from] MinorError),
}

fn laurent_kind(e: &LaurentError) -> ErrorKind {
    use LaurentError::*;
    match e {
        VarTableMismatch
        | DuplicateVariable(_)
        | UnknownVariable(_)
        | ArityMismatch { .. }
        | BadCoefficient(_) => ErrorKind::Validation,
        DivisionByZero
        | NotDivisible { .. }
        | NonUnitNegativePower(_)
        | NotPolynomialAfterSubstitution(_) => ErrorKind::Assertion,
    }
}

fn seed_kind(e: &SeedError) -> ErrorKind {
    use SeedError::*;
    match e {
        NotLaurent { .. } | NegativeFrozenExponent { .. } | NonIntegral(_) => ErrorKind::Assertion,
        Weyl(_) => ErrorKind::Validation,
        Laurent(l) => laurent_kind(l),
        _ => ErrorKind::Validation,
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Weyl(_) => ErrorKind::Validation,
            Error::Laurent(e) => laurent_kind(e),
            Error::Seed(e) => seed_kind(e),
            Error::Dimvec(DimvecError::Seed(e)) => seed_kind(e),
            Error::Dimvec(DimvecError::LengthMismatch { .. }) => ErrorKind::Validation,
            Error::Dimvec(_) => ErrorKind::Assertion,
            Error::Interval(e) => match e {
                IntervalError::InvalidIdentity { .. }
                | IntervalError::StarUndefined(_)
                | IntervalError::IndexOutOfRange { .. } => ErrorKind::Validation,
                IntervalError::Seed(s) => seed_kind(s),
                IntervalError::Laurent(l) => laurent_kind(l),
                _ => ErrorKind::Assertion,
            },
            Error::Shuffle(e) => match e {
                ShuffleError::LetterOutOfRange { .. } => ErrorKind::Validation,
                ShuffleError::Laurent(l) => laurent_kind(l),
                _ => ErrorKind::Assertion,
            },
            Error::Minor(e) => match e {
                MinorError::NotTypeA | MinorError::SizeMismatch(_) => ErrorKind::Validation,
                MinorError::Laurent(l) => laurent_kind(l),
                _ => ErrorKind::Assertion,
            },
        }
    }
}
