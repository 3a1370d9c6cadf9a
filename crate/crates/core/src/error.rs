//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong while constructing or checking matrices.
///
/// Index pairs carried by errors are 1-based, matching the row/column
/// conventions used in all user-facing output.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter '{0}' has no assigned value")]
    MissingParameter(char),

    #[error("value assigned to '{param}' has modulus {modulus}, expected modulus 1")]
    NonUnimodularValue { param: char, modulus: f64 },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("'{0}' is not a valid parameter name (expected a single letter a-f)")]
    BadParamName(String),

    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("size {0} exceeds the supported bound {1}")]
    TooLarge(u64, u64),

    #[error("order {order} is invalid here: {reason}")]
    BadOrder { order: u64, reason: String },

    #[error("matrix is not a conference matrix (index ({0}, {1}), 1-based)")]
    NotConference(usize, usize),

    #[error("matrix is not a complex Hadamard matrix (index ({0}, {1}), 1-based)")]
    NotHadamard(usize, usize),

    #[error("matrix is not a Seidel matrix of the requested frame")]
    NotSeidel,

    #[error("matrix is not a real skew-symmetric conference matrix (index ({0}, {1}), 1-based)")]
    NotSkewConference(usize, usize),

    #[error("matrix is not Hermitian (index ({0}, {1}), 1-based, deviation {2})")]
    NotHermitian(usize, usize, f64),

    #[error("expected an eigenvalue-1 cluster of size {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("matrix orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("first-row entry in column {0} (1-based) is too close to zero to normalize")]
    ZeroEntryInFirstRow(usize),

    #[error("cannot mix symbolic parameters with arbitrary numeric values in one matrix")]
    MixedScalarModes,

    #[error("operation '{0}' requires a complex-valued matrix; evaluate the symbolic one first")]
    SymbolicNotSupported(&'static str),

    #[error("entry at ({0}, {1}) (1-based) is not finite")]
    NonFiniteEntry(usize, usize),

    #[error("matrix violates the structural invariants of kind '{kind}': {reason}")]
    BadStructure { kind: String, reason: String },

    #[error("Seidel matrix does not reduce to a known class: {0}")]
    ClassificationFailed(String),

    #[error("no parametric family of order {0} is available (supported: 6, 10, 14)")]
    NoFamilyForOrder(usize),

    #[error("expected {expected} parameters for this family, got {got}")]
    WrongParamCount { expected: usize, got: usize },

    #[error("invalid scalar argument '{0}': {1}")]
    BadScalarArg(String, String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
