use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Every fallible operation reports through this.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A point or exponent vector has the wrong length.
    ArityMismatch { expected: usize, got: usize },
    /// Two polynomials live in rings with different variable counts.
    NvarsMismatch { left: usize, right: usize },
    /// Modular evaluation needs a modulus of at least 2.
    ModulusTooSmall,
    /// Modular evaluation only accepts integer inputs.
    NonIntegerModularInput,
    /// A desk-scale guard was hit. `cap` names the limit (and the CLI flag
    /// that raises it, where one exists).
    CapExceeded {
        cap: &'static str,
        limit: usize,
        needed: usize,
    },
    /// Text input could not be parsed. Line numbers are 1-based.
    Parse { line: usize, msg: String },
    /// The zero polynomial has no isolatable roots.
    ZeroPolynomial,
    /// Operation needs at least one polynomial in the system.
    EmptySystem,
    /// The complete sign-condition backend only handles one variable.
    NotUnivariate,
    /// A circuit failed a structural invariant.
    InvalidCircuit(String),
    /// Sign-condition table is not attested complete and the caller did not
    /// override.
    IncompleteTable,
    /// The truncated sign condition is not realized by any table row.
    UnrealizedTruncation,
    /// A replayed test gate computed a polynomial that the enumeration
    /// missed; signals an enumeration bug.
    TestedPolyNotFound(String),
    /// A star-sequence step filtered the vector set down to nothing.
    InconsistentChoices,
    /// The oracle answered in a way a complete table makes impossible.
    OracleInconsistency(String),
    /// The input realizes a sign condition absent from the table.
    ConditionNotInTable,
    /// Choice-list replay matched zero or several conditions.
    TranscriptCorruption(String),
    /// Two GF(2) vectors of different lengths were combined.
    LengthMismatch { left: usize, right: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected} values, got {got}")
            }
            Error::NvarsMismatch { left, right } => {
                write!(f, "variable-count mismatch: {left} vs {right}")
            }
            Error::ModulusTooSmall => write!(f, "modulus must be at least 2"),
            Error::NonIntegerModularInput => {
                write!(f, "modular evaluation requires integer inputs")
            }
            Error::CapExceeded { cap, limit, needed } => {
                write!(f, "{cap} cap exceeded: need {needed}, limit {limit}")
            }
            Error::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Error::ZeroPolynomial => write!(f, "zero polynomial"),
            Error::EmptySystem => write!(f, "empty polynomial system"),
            Error::NotUnivariate => {
                write!(f, "complete sign-condition enumeration requires one variable")
            }
            Error::InvalidCircuit(msg) => write!(f, "invalid circuit: {msg}"),
            Error::IncompleteTable => {
                write!(f, "sign-condition table is not attested complete")
            }
            Error::UnrealizedTruncation => {
                write!(f, "truncated sign condition not realized by any table row")
            }
            Error::TestedPolyNotFound(p) => {
                write!(f, "tested polynomial not in enumerated list: {p}")
            }
            Error::InconsistentChoices => write!(f, "choice list filtered the set to empty"),
            Error::OracleInconsistency(msg) => write!(f, "oracle inconsistency: {msg}"),
            Error::ConditionNotInTable => {
                write!(f, "input realizes a sign condition absent from the table")
            }
            Error::TranscriptCorruption(msg) => write!(f, "transcript corruption: {msg}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
        }
    }
}

impl std::error::Error for Error {}
