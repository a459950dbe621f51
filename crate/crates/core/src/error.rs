use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field of size {size} exceeds the table bound {bound}")]
    TooLarge { size: u64, bound: u64 },
    #[error("no primitive polynomial of degree {degree} found over GF({p})")]
    NoIrreducibleFound { p: u64, degree: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not in the subfield GF(q)")]
    NotInSubfield,
    #[error("element has no square root")]
    NoSquareRoot,
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("leading coefficient a must be nonzero")]
    ZeroA,
    #[error("cannot parse element {0:?}")]
    ParseElem(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("no gamma solves the reduction 2a*gamma - gamma^q = -b")]
    NoGamma,
    #[error("q = {q} exceeds the enumeration bound {bound}")]
    BoundExceeded { q: u64, bound: u64 },
    #[error("m = {m} outside 0..={max}")]
    MOutOfRange { m: u64, max: u64 },
    #[error("no (a, b) decomposition of m = {m} in any phase row")]
    PhaseDecompositionFailed { m: u64 },
    #[error("m = {m} matches phase rows {phases:?} with different parameters")]
    PhaseAmbiguous { m: u64, phases: Vec<u8> },
    #[error("{0} four-column supports exceed the search bound")]
    TooManySupports(u64),
    #[error("d = {d} outside 2..={q}")]
    DOutOfRange { d: u64, q: u64 },
    #[error("j = {j} outside 0..={max}")]
    JOutOfRange { j: u64, max: u64 },
    #[error("weight-4 formulas need q >= 3, got {0}")]
    QTooSmall(u64),
    #[error("inexact division in {0}")]
    InexactDivision(&'static str),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
