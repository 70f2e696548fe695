use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed function spec `{0}`: {1}")]
    MalformedSpec(String, String),
    #[error("arity {0} out of range (supported: {1}..={2})")]
    ArityOutOfRange(usize, usize, usize),
    #[error("level {level} outside 0..={arity}")]
    LevelOutOfRange { level: usize, arity: usize },
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("representation has no prototypes")]
    EmptyRepresentation,
    #[error("point {0} is duplicated within one side of the representation")]
    DuplicatePrototype(String),
    #[error("point {0} appears both as a positive and a negative prototype")]
    OverlappingPrototype(String),
    #[error("tie: nearest positive and nearest negative prototypes are equidistant")]
    Tie,
    #[error("k-NN not well defined: the k-th and (k+1)-th smallest distances are equal")]
    NotWellDefined,
    #[error("k = {k} exceeds the number of prototypes ({size})")]
    KTooLarge { k: usize, size: usize },
    #[error("k must be positive")]
    KZero,
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("compiler invariant violated: {0}")]
    CompileInvariant(String),
    #[error("representation does not verify against the function")]
    RepresentationInvalid,
    #[error("list of points is empty")]
    EmptyPointList,
    #[error("exhaustive search at arity {arity} needs an explicit size cutoff (unbounded search supported up to arity {max})")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("search parameter out of range: {0}")]
    SearchLimit(String),
    #[error("empty grid")]
    EmptyGrid,
    #[error("{0}")]
    Format(String),
    #[error("method `{method}` is not applicable: {reason}")]
    NotApplicable { method: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
