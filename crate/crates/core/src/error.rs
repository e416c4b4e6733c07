use thiserror::Error;

use crate::surfaces::Diagnostic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Caller passed arguments that violate an operation's contract.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("t-degree {requested} lies beyond the truncation order {truncation}")]
    OutOfRange { requested: u32, truncation: u32 },

    #[error("monomial has t-degree 0; the binomial expansion would not terminate")]
    NonTerminating,

    #[error("factor {index} is not normalized: {reason}")]
    Normalization { index: u32, reason: String },

    #[error("surface `{0}` has no h^{{1,0}}/h^{{2,0}} data")]
    MissingHodgeData(String),

    #[error("surface `{0}` has b0 != 1; the h^{{p,0}} series requires h^{{0,0}} = 1")]
    Disconnected(String),

    #[error("unknown surface `{0}`")]
    UnknownSurface(String),

    #[error("invalid family parameter: {0}")]
    InvalidParameter(String),

    #[error("surface `{name}` failed validation: {}", format_diagnostics(.diagnostics))]
    Validation {
        name: String,
        diagnostics: Vec<Diagnostic>,
    },

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("oracle refused: n = {n} exceeds the enumeration bound {bound}")]
    OracleBound { n: u32, bound: u32 },

    #[error("partitions have different sizes ({a} vs {b}); the products differ in dimension ({} vs {})", 2 * .a, 2 * .b)]
    DimensionMismatch { a: u32, b: u32 },

    #[error("io error: {0}")]
    Io(String),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
