use thiserror::Error;

/// Errors raised by the library and the command-line front end.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("order relation has a cycle through `{0}` and `{1}`")]
    CycleDetected(String, String),
    #[error("poset is not connected: `{0}` is not reachable from `{1}`")]
    Disconnected(String, String),
    #[error("poset has no elements")]
    EmptyPoset,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("paths are not composable: {0}")]
    NotComposable(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not unitary: {0}")]
    NotUnitary(String),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("group closure exceeded bound of {0} elements")]
    ClosureBoundExceeded(usize),
    #[error("invalid cocycle: {0} violated 2-simplices")]
    InvalidCocycle(usize),
    #[error("images do not define a representation: {0}")]
    InvalidRepresentation(String),
    #[error("word cannot be rewritten in the reduced presentation: {0}")]
    WordNotReducible(String),
    #[error("not in the normalizer of the fiber group: {0}")]
    NotInNormalizer(String),
    #[error("quotient data is not a representation: {0}")]
    InvalidQuotient(String),
    #[error("search space of {size} candidates exceeds cap {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },
    #[error("matrix size {size} exceeds cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("not a subgroup of the ambient group: {0}")]
    NotSubgroup(String),
    #[error("unsupported fiber: {0}")]
    UnsupportedFiber(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    /// Stable machine-readable code, used in structured CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CycleDetected(..) => "cycle-detected",
            Error::Disconnected(..) => "disconnected",
            Error::EmptyPoset => "empty-poset",
            Error::UnknownElement(_) => "unknown-element",
            Error::DuplicateElement(_) => "duplicate-element",
            Error::NotComposable(_) => "not-composable",
            Error::UnknownGenerator(_) => "unknown-generator",
            Error::NotSquare { .. } => "not-square",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::NotUnitary(_) => "not-unitary",
            Error::NonFinite => "non-finite",
            Error::ClosureBoundExceeded(_) => "closure-bound-exceeded",
            Error::InvalidCocycle(_) => "invalid-cocycle",
            Error::InvalidRepresentation(_) => "invalid-representation",
            Error::WordNotReducible(_) => "word-not-reducible",
            Error::NotInNormalizer(_) => "not-in-normalizer",
            Error::InvalidQuotient(_) => "invalid-quotient",
            Error::SearchSpaceTooLarge { .. } => "search-space-too-large",
            Error::SizeCapExceeded { .. } => "size-cap-exceeded",
            Error::NotSubgroup(_) => "not-subgroup",
            Error::UnsupportedFiber(_) => "unsupported-fiber",
            Error::Parse(_) => "parse",
            Error::Usage(_) => "usage",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
