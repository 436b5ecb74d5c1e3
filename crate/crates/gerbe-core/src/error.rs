//! Error type shared by all modules.

use core::fmt;

/// Failure modes of the constructions in this crate.
///
/// Numerical tolerance violations are reported with the offending residual so
/// callers can distinguish "slightly off" from "structurally wrong".
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix dimension below the smallest supported group (`n >= 2`).
    DimensionTooSmall { n: usize },
    /// Operands built over different `n`.
    DimensionMismatch { left: usize, right: usize },
    /// A claimed special unitary failed `U^* U = I` or `det U = 1`.
    NotSpecialUnitary { residual: f64 },
    /// A claimed unitary failed `U^* U = I`.
    NotUnitary { residual: f64 },
    /// Torus phases do not sum to zero.
    PhasesNotClosed { residual: f64 },
    /// A projection tuple violated Hermitian/idempotent/orthogonality/
    /// completeness/rank conditions.
    NotProjectionTuple { what: &'static str, residual: f64 },
    /// A tangent generator is not anti-Hermitian traceless.
    BadGenerator { residual: f64 },
    /// A point of `Z = U(1) \ {1}` was requested at or too near `1`.
    ZPointAtOne { distance: f64 },
    /// A complex number claimed to lie on the unit circle does not.
    NotOnCircle { residual: f64 },
    /// `z` is too close to the spectrum of the group element.
    OnSpectrum { distance: f64 },
    /// Argument coincidence makes an arc-ordering query degenerate.
    DegenerateArc { distance: f64 },
    /// The argument of a branch logarithm lies on the cut ray.
    OnBranchCut { distance: f64 },
    /// Eigendecomposition could not be certified against the input.
    EigenFailure { residual: f64 },
    /// A value expected to be an integer was not.
    NotIntegral { value: f64, residual: f64 },
    /// Fibre-product compatibility between coordinates failed.
    FibreMismatch { residual: f64 },
    /// A tangent frame was given the wrong number of vectors.
    ArityMismatch { expected: usize, got: usize },
    /// Wedge arity exceeded what the evaluator supports.
    ArityOverflow { arity: usize },
    /// Chart evaluated outside its parameter domain.
    OutsideChart,
    /// Deligne cochain is missing data on a listed overlap.
    MissingOverlap { what: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionTooSmall { n } => write!(f, "dimension {n} < 2"),
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::NotSpecialUnitary { residual } => {
                write!(f, "not special unitary (residual {residual:.3e})")
            }
            Error::NotUnitary { residual } => write!(f, "not unitary (residual {residual:.3e})"),
            Error::PhasesNotClosed { residual } => {
                write!(f, "torus phases do not sum to 0 (residual {residual:.3e})")
            }
            Error::NotProjectionTuple { what, residual } => {
                write!(f, "projection tuple violates {what} (residual {residual:.3e})")
            }
            Error::BadGenerator { residual } => {
                write!(f, "generator not anti-Hermitian traceless (residual {residual:.3e})")
            }
            Error::ZPointAtOne { distance } => {
                write!(f, "point of Z excluded: too close to 1 (distance {distance:.3e})")
            }
            Error::NotOnCircle { residual } => {
                write!(f, "not on the unit circle (residual {residual:.3e})")
            }
            Error::OnSpectrum { distance } => {
                write!(f, "z too close to the spectrum (distance {distance:.3e})")
            }
            Error::DegenerateArc { distance } => {
                write!(f, "arc ordering degenerate (distance {distance:.3e})")
            }
            Error::OnBranchCut { distance } => {
                write!(f, "argument on the branch ray (distance {distance:.3e})")
            }
            Error::EigenFailure { residual } => {
                write!(f, "eigendecomposition failed to certify (residual {residual:.3e})")
            }
            Error::NotIntegral { value, residual } => {
                write!(f, "value {value} not integral (residual {residual:.3e})")
            }
            Error::FibreMismatch { residual } => {
                write!(f, "fibre-product compatibility violated (residual {residual:.3e})")
            }
            Error::ArityMismatch { expected, got } => {
                write!(f, "frame arity {got}, evaluator wants {expected}")
            }
            Error::ArityOverflow { arity } => write!(f, "wedge arity {arity} too large"),
            Error::OutsideChart => write!(f, "evaluation outside chart domain"),
            Error::MissingOverlap { what } => write!(f, "cochain missing data: {what}"),
        }
    }
}
