//! Exact q-series core.
//!
//! Coefficients everywhere are rational functions in `q` with integer
//! polynomial numerator and denominator ([`QRat`]), so equality of series is
//! decidable and canonical. Multivariate truncated Laurent series carry their
//! own truncation data ([`TruncationSpec`]); the two grading functionals cut
//! the Kähler (`z`) and equivariant (`a`) directions independently.

use core::fmt;

mod pochhammer;
mod prefactor;
mod qrat;
mod series;

pub use pochhammer::{
    expand_inverse_linear, inf_pochhammer, inv_inf_pochhammer, pochhammer_finite, q_factorial,
    q_inv_factorial, FactorProduct, LinearFactor, PochBase,
};
pub use prefactor::{LogPrefactor, PrefactoredSeries, Var};
pub use qrat::{QPoly, QRat};
pub use series::{ExponentMonomial, TruncatedSeries, TruncationSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    /// Inversion or division by the zero rational function.
    DivisionByZero,
    /// A factor that must be inverted is exactly zero: the specialization is
    /// non-generic (e.g. a Pochhammer denominator hit `1 − q^0`).
    PoleAtTruncation,
    /// An expansion variable has non-positive grading, so the expansion would
    /// not truncate.
    NonPositiveGrading,
    /// Binary series operation on operands with different truncation specs.
    SpecMismatch,
    /// Coefficient query outside the truncation window.
    OutOfTruncationRange,
}

impl fmt::Display for QSeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSeriesError::DivisionByZero => write!(f, "division by zero"),
            QSeriesError::PoleAtTruncation => {
                write!(f, "non-generic specialization: inverted factor is exactly zero")
            }
            QSeriesError::NonPositiveGrading => {
                write!(f, "expansion monomial has non-positive grading")
            }
            QSeriesError::SpecMismatch => write!(f, "truncation specs differ"),
            QSeriesError::OutOfTruncationRange => {
                write!(f, "coefficient query outside the truncation window")
            }
        }
    }
}

impl core::error::Error for QSeriesError {}
