use alloc::string::String;
use core::fmt;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two operands carry different cyclotomy indices.
    MismatchedIndex { left: u32, right: u32 },
    /// Division by the zero element.
    DivisionByZero,
    /// Cyclotomy index outside the supported range.
    UnsupportedIndex(u32),
    /// A text encoding could not be parsed.
    Parse(String),
    /// A denominator is divisible by the residue characteristic.
    DenominatorNotCoprime { p: u64 },
    /// The prime ideal is of bad reduction for the curve.
    BadPrime { p: u64 },
    /// `gcd(m, deg f) > 1` is not supported.
    DeltaNotOne { m: u32, n: usize },
    /// The polynomial `f` has a repeated root (or is too short).
    Singular,
    /// A projected power sum failed to be integral.
    NonIntegral,
    /// A requested extension degree is outside the supported range.
    ExtensionTooLarge(usize),
    /// The brute-force oracle guard was exceeded.
    OracleGuard { q: u64 },
    /// No bad factor known for a bad prime below the coefficient bound.
    MissingBadFactor { p: u64 },
    /// Evaluation parameters are inconsistent.
    InvalidParams(String),
    /// A pole of the gamma factor was hit.
    GammaPole,
    /// The solved root number is far from the unit circle.
    SignNotUnitary { modulus: f64 },
    /// Numerical root finding failed or roots nearly coincide.
    NumericallySingular(String),
    /// Period matrix not square for the requested character.
    NonSquare { rows: usize, cols: usize },
    /// Not enough coefficients for the requested precision.
    InsufficientCoefficients { have: usize, need: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MismatchedIndex { left, right } => {
                write!(f, "cyclotomy index mismatch: {left} vs {right}")
            }
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::UnsupportedIndex(m) => write!(f, "unsupported cyclotomy index {m}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::DenominatorNotCoprime { p } => {
                write!(f, "denominator divisible by residue characteristic {p}")
            }
            Error::BadPrime { p } => write!(f, "bad reduction above {p}"),
            Error::DeltaNotOne { m, n } => {
                write!(f, "gcd(m, deg f) = gcd({m}, {n}) must be 1")
            }
            Error::Singular => f.write_str("polynomial is not separable"),
            Error::NonIntegral => f.write_str("projected power sum is not integral"),
            Error::ExtensionTooLarge(e) => write!(f, "extension degree {e} too large"),
            Error::OracleGuard { q } => write!(f, "oracle guard exceeded at q = {q}"),
            Error::MissingBadFactor { p } => write!(f, "no bad factor supplied at {p}"),
            Error::InvalidParams(s) => write!(f, "invalid parameters: {s}"),
            Error::GammaPole => f.write_str("pole of the gamma factor"),
            Error::SignNotUnitary { modulus } => {
                write!(f, "root number has modulus {modulus}, expected 1")
            }
            Error::NumericallySingular(s) => write!(f, "numerically singular: {s}"),
            Error::NonSquare { rows, cols } => {
                write!(f, "period matrix is {rows}x{cols}, expected square")
            }
            Error::InsufficientCoefficients { have, need } => {
                write!(f, "have {have} coefficients, need {need}")
            }
        }
    }
}

impl core::error::Error for Error {}
