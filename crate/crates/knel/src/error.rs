use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("arity must be a positive integer")]
    ZeroArity,
    #[error("interlace bitstring must have even length, got {0} characters")]
    OddPattern(usize),
    #[error("interlace bitstring must contain the same number of zeros and ones")]
    UnbalancedPattern,
    #[error("invalid character {0:?} in interlace bitstring")]
    BadPatternChar(char),
    #[error("tuple has {found} entries, expected {expected}")]
    TupleLengthMismatch { expected: usize, found: usize },
    #[error("marker tuple must be strictly increasing")]
    TupleNotIncreasing,
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("vertex {0} carries no marker tuple")]
    UnmarkedVertex(usize),
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("interlace type mismatch: {left} vs {right}")]
    InterlaceMismatch { left: String, right: String },
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("no catalogs supplied")]
    NoCatalogs,
    #[error("catalog does not match the query: {0}")]
    CatalogMismatch(String),
    #[error("misaligned identification: {0}")]
    MisalignedIdentification(String),
    #[error("inputs are not delta-system shaped: {0}")]
    NotDeltaShaped(String),
    #[error("ground set of size {ground} cannot host {arity}-tuples")]
    GroundTooSmall { ground: usize, arity: usize },
    #[error("malformed catalog data: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
