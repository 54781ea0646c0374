use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// One violated normal-form condition. Serializes as its bare name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Violation {
    /// A numeric field is NaN or infinite.
    NonFinite,
    /// `|alpha|` outside `(0, 1)`.
    AlphaOutOfDisc,
    /// Degree of `Q` (or length of the low coefficients) exceeds `s`.
    DegreeTooHigh,
    /// `gcd{p, m | a_m != 0} != 1`.
    GcdCondition,
    /// `a != 0` although `(p - 1)` does not divide `s` or `lambda != 1`.
    ForbiddenA,
    /// `a != 0` and `ps/(p - 1)` is not an integer.
    NonIntegerExponent,
    /// The word contains no `S` letter.
    NoSFactor,
    /// The word is empty.
    EmptyWord,
    /// The word contains a letter other than `S` or `T`.
    InvalidLetter,
    /// `s < 1`.
    ExponentTooSmall,
    /// `p < 2`.
    DegreeTooSmall,
    /// `lambda = 0`.
    ZeroLambda,
    /// Word matrix entries exceed the 63-bit range.
    Overflow,
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::NonFinite => "NonFinite",
            Violation::AlphaOutOfDisc => "AlphaOutOfDisc",
            Violation::DegreeTooHigh => "DegreeTooHigh",
            Violation::GcdCondition => "GcdCondition",
            Violation::ForbiddenA => "ForbiddenA",
            Violation::NonIntegerExponent => "NonIntegerExponent",
            Violation::NoSFactor => "NoSFactor",
            Violation::EmptyWord => "EmptyWord",
            Violation::InvalidLetter => "InvalidLetter",
            Violation::ExponentTooSmall => "ExponentTooSmall",
            Violation::DegreeTooSmall => "DegreeTooSmall",
            Violation::ZeroLambda => "ZeroLambda",
            Violation::Overflow => "Overflow",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid germ parameters: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("point outside the germ domain: {0}")]
    DomainViolation(String),
    #[error("integer overflow in word matrix product")]
    Overflow,
    #[error("degenerate spectrum: discriminant {0} is not positive")]
    DegenerateSpectrum(i128),
    #[error("coordinate is exactly zero")]
    ZeroCoordinate,
    #[error("point outside the function domain: {0}")]
    OutOfDomain(String),
    #[error("period mismatch: expected {expected}, got {got}")]
    PeriodMismatch { expected: f64, got: f64 },
    #[error("periodic function is not in the cone (min of -psi''+psi'+1 = {min_value})")]
    NotInCone { min_value: f64 },
    #[error("this family requires a periodic function psi")]
    MissingPsi,
    #[error("the Enoki family takes no periodic function")]
    UnexpectedPsi,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed germ specification: {0}")]
    Parse(#[from] serde_json::Error),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.name()).collect::<Vec<_>>().join(", ")
}

pub type Result<T> = std::result::Result<T, Error>;
