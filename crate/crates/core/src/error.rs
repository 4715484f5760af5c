use thiserror::Error;

/// Errors produced by the library.
///
/// Variants are grouped so callers can map them onto process exit codes:
/// [`Error::is_numerical`] covers solver and enumeration guards, everything
/// else is an input-validation failure.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty matrix input")]
    EmptyInput,
    #[error("non-binary symbol {symbol:?} on line {line}")]
    NonBinarySymbol { line: usize, symbol: char },
    #[error("ragged rows: line {line} has {found} entries, expected {expected}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("malformed alist: {0}")]
    Alist(String),
    #[error("code dimension {k} exceeds enumeration cap {cap}")]
    DimensionTooLarge { k: usize, cap: usize },
    #[error("polynomial does not divide x^{n} - 1")]
    NotAGeneratorPolynomial { n: usize },
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("unknown builtin matrix {0:?}")]
    UnknownBuiltin(String),
    #[error("row {0} of the parity-check matrix is all zero")]
    ZeroRow(usize),
    #[error("dimension {n} exceeds the enumeration guard {max}")]
    DimensionGuard { n: usize, max: usize },
    #[error("ray budget of {max} exceeded")]
    RayBudget { max: usize },
    #[error("arithmetic overflow in exact computation")]
    Overflow,
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex exceeded {0} pivots")]
    Cycling(usize),
    #[error("generator line {line}: {reason}")]
    GeneratorFormat { line: usize, reason: String },
    #[error("need at least {need} vectors, got {got}")]
    TooFewVectors { need: usize, got: usize },
    #[error("empty generator set")]
    EmptySet,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("spanning tree brute force limited to {max} nodes, got {got}")]
    TooManyNodes { max: usize, got: usize },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of numerical machinery rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DimensionTooLarge { .. }
                | Error::DimensionGuard { .. }
                | Error::RayBudget { .. }
                | Error::Overflow
                | Error::Infeasible
                | Error::Unbounded
                | Error::Cycling(_)
                | Error::TooManyNodes { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
