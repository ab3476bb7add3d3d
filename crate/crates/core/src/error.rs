use thiserror::Error;

use crate::exactmath::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Violations of the preconditions shared by the bound, construction and
/// verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParameterError {
    #[error("number of events must be at least {min}, got {n}")]
    TooFewEvents { n: u32, min: u32 },
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(Rational),
    #[error("level {k} is not admissible for n={n}, p={p}")]
    InadmissibleLevel { n: u32, p: Rational, k: u32 },
    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: u32, max: u32 },
    #[error("independence order r={r} must lie in 1..={n}")]
    OrderOutOfRange { r: u32, n: u32 },
}

/// Ways a level sequence can fail to be an exchangeable probability
/// distribution.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistributionError {
    #[error("expected {expected} levels for n={n}, got {got}")]
    LevelCount { n: u32, expected: usize, got: usize },
    #[error("level x_{level} = {value} is negative")]
    NegativeLevel { level: u32, value: Rational },
    #[error("total mass is {0}, expected 1")]
    Normalization(Rational),
    #[error("expected {expected} atom probabilities, got {got}")]
    AtomCount { expected: usize, got: usize },
    #[error("atom {atom} has negative probability {value}")]
    NegativeAtom { atom: u32, value: Rational },
    #[error("atom distributions support 1..={max} events, got {n}")]
    UnsupportedSize { n: u32, max: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("event A{index} is out of range for n={n}")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("count {count} is out of range for n={n}")]
    CountOutOfRange { count: u32, n: u32 },
    #[error("distribution has n={got}, expression was compiled for n={expected}")]
    DimensionMismatch { expected: u32, got: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("atom LP supports 1..={max} events, got {n}")]
    TooManyEvents { n: u32, max: u32 },
    #[error(transparent)]
    Parameter(#[from] ParameterError),
    #[error(transparent)]
    Event(#[from] EventError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("primal has {got} entries, expected {expected}")]
    PrimalLength { expected: usize, got: usize },
    #[error("certificate has {got} entries, expected {expected}")]
    CertificateLength { expected: usize, got: usize },
    #[error("primal variable {0} is negative")]
    NegativePrimal(usize),
    #[error("constraint {0} is not satisfied exactly")]
    PrimalInfeasible(usize),
    #[error("reported value {reported} differs from objective {actual}")]
    ValueMismatch { reported: Rational, actual: Rational },
    #[error("dual constraint for column {0} is violated")]
    DualInfeasible(usize),
    #[error("dual objective {dual} differs from primal objective {primal}")]
    DualityGap { primal: Rational, dual: Rational },
    #[error("Farkas row has a wrong-signed entry at column {0}")]
    FarkasColumn(usize),
    #[error("Farkas row does not separate the right-hand side")]
    FarkasRhs,
    #[error("ray is not a recession direction")]
    InvalidRay,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("distribution is not pairwise independent with marginal {p}")]
    NotPairwiseIndependent { p: Rational },
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Distribution(#[from] DistributionError),
}
