//! One error type for the whole crate.
//!
//! Errors are values here, not panics: a vanishing e_h ([`Error::SingularStep`])
//! or a torsion truncation is meaningful output, and the callers that care
//! match on it.

use std::fmt;

/// Everything that can go wrong across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by zero in a scalar field.
    DivisionByZero,
    /// Two scalars from different fields (or different moduli) were combined.
    FieldMismatch,
    /// A modulus was rejected: not prime, or smaller than 5.
    BadModulus(u64),
    /// A string failed to parse; the payload says what was being parsed.
    Parse(String),
    /// Square root of a series of odd degree.
    OddDegree,
    /// Square root of a series whose leading coefficient is not a square.
    NonSquareLeadingCoefficient,
    /// A series computation ran out of retained terms before the answer was
    /// certain. Callers double the precision and replay.
    PrecisionExhausted,
    /// D is the square of a polynomial, so Y is not a quadratic irrational.
    DegenerateSquare,
    /// Q does not divide the norm P² + T·P − D.
    IdealViolation,
    /// The expansion hit e_{h+1} = 0 at step h and cannot continue.
    SingularStep { h: i64 },
    /// The curve has v = 0; the quartic engine refuses and the general engine
    /// should be used instead.
    ZeroV,
    /// The requested start point does not lie on the curve.
    PointNotOnCurve,
    MapUndefined,
    /// A normalisation constant that must be nonzero was zero.
    ZeroNormalization,
    /// W_m = 0 for the reported m, so the requested construction degenerates.
    TorsionDegenerate { m: i64 },
    /// A stated invariant failed; the payload identifies it.
    InvariantBroken(String),
    /// No period was found within the step budget.
    NoPeriodFound,
    /// Two values that must agree did not; the payload identifies the site.
    Mismatch(String),
    /// Sequence extension needed to divide by the zero value at this index.
    ZeroDivision { index: i64 },
    /// An operation's precondition failed; the payload says which.
    PreconditionFailed(String),
    /// No renormalisation with constant c_h·c_{h+1} exists for the input.
    NoNormalization,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::FieldMismatch => write!(f, "scalars from different fields"),
            Error::BadModulus(p) => write!(f, "bad modulus {p}: need a prime p >= 5"),
            Error::Parse(what) => write!(f, "parse error: {what}"),
            Error::OddDegree => write!(f, "series square root needs even degree"),
            Error::NonSquareLeadingCoefficient => {
                write!(f, "series square root needs a square leading coefficient")
            }
            Error::PrecisionExhausted => write!(f, "series precision exhausted"),
            Error::DegenerateSquare => write!(f, "D is a perfect square"),
            Error::IdealViolation => write!(f, "Q does not divide P^2 + T*P - D"),
            Error::SingularStep { h } => write!(f, "singular step: e = 0 at line {h}"),
            Error::ZeroV => write!(f, "curve has v = 0; use the general engine"),
            Error::PointNotOnCurve => write!(f, "point is not on the curve"),
            Error::MapUndefined => write!(f, "birational map undefined at this point"),
            Error::ZeroNormalization => write!(f, "normalisation constant is zero"),
            Error::TorsionDegenerate { m } => write!(f, "W_{m} = 0: torsion of order {m}"),
            Error::InvariantBroken(what) => write!(f, "invariant broken: {what}"),
            Error::NoPeriodFound => write!(f, "no period found within the step budget"),
            Error::Mismatch(what) => write!(f, "mismatch: {what}"),
            Error::ZeroDivision { index } => {
                write!(f, "extension would divide by zero value at index {index}")
            }
            Error::PreconditionFailed(what) => write!(f, "precondition failed: {what}"),
            Error::NoNormalization => write!(f, "no constant-product renormalisation exists"),
        }
    }
}

impl std::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
