use thiserror::Error;

use crate::machine::Generator;

/// Every failure the library reports. Each variant names the invariant that broke.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("alphabet mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: usize, found: usize },
    #[error("letter {letter} out of range for alphabet of size {n}")]
    LetterOutOfRange { letter: usize, n: usize },
    #[error("invalid signature: {0}")]
    BadSignature(String),
    #[error("{prefix} is not a prefix of {word}")]
    NotPrefix { prefix: String, word: String },
    #[error("empty input set")]
    EmptySet,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("Overlap: {0} and {1} are comparable")]
    Overlap(String, String),
    #[error("Gap: {0} has no prefix in the code")]
    Gap(String),
    #[error("table is not total: {0}")]
    NotTotal(String),
    #[error("IncoherentTransition at state {state}, gens ({x}, {y})")]
    IncoherentTransition { state: usize, x: Generator, y: Generator },
    #[error("IncoherentOutput at state {state}, gens ({x}, {y})")]
    IncoherentOutput { state: usize, x: Generator, y: Generator },
    #[error("state {0} does not exist")]
    NoSuchState(String),
    #[error("CapExceeded: image did not stabilize within {0} iterations")]
    CapExceeded(usize),
    #[error("PrefixViolation at state {0}: image prefix does not divide the shifted output")]
    PrefixViolation(usize),
    #[error("NotSynchronizing")]
    NotSynchronizing,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("BoundExceeded: more than {0} reachable states")]
    BoundExceeded(usize),
    #[error("Inconsistent: input coordinate {coord} feeds output coordinates {targets:?}")]
    Inconsistent { coord: usize, targets: Vec<usize> },
    #[error("DecompositionMismatch: product of factors is not the input")]
    DecompositionMismatch,
    #[error("NotInvertible: no inverse found")]
    NotInvertible,
    #[error("SignatureObstruction: image has {0} cones, not 1 mod (n-1)")]
    SignatureObstruction(usize),
    #[error("SpecTooLarge: estimated {estimate} raw tables exceeds budget {budget}")]
    SpecTooLarge { estimate: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
