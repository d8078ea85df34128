use thiserror::Error;

/// Coarse classification used to map failures onto CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Numeric,
    Ambiguity,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("argument {re}{im:+}i is not on the unit circle (|z| = {modulus})")]
    NonUnitArgument { re: f64, im: f64, modulus: f64 },

    #[error("denominator nearly vanishes on the circle (|q| = {modulus:.3e})")]
    DenominatorNearZero { modulus: f64 },

    #[error("grid of {samples} samples is too coarse: {reason}")]
    GridTooCoarse { samples: usize, reason: String },

    #[error("shape mismatch in {op}: {detail}")]
    ShapeMismatch { op: &'static str, detail: String },

    #[error("symbol is not bounded away from zero on the grid (min |u| = {min_modulus:.3e})")]
    NotBoundedAwayFromZero { min_modulus: f64 },

    #[error("winding number {raw} is not close to an integer; refine the grid")]
    NonIntegerWinding { raw: f64 },

    #[error("symbol is not unimodular on the grid (max ||u| - 1| = {max_deviation:.3e})")]
    NotUnimodular { max_deviation: f64 },

    #[error("unsupported representation: {0}")]
    UnsupportedRepresentation(String),

    #[error("ambiguous spectrum at level {level}: singular value {value} lies in the guard band")]
    AmbiguousSpectrum { level: f64, value: f64 },

    #[error("values are not nonincreasing: {0}")]
    NotNonincreasing(String),

    #[error("bundle invariant violated: {}", .0.join("; "))]
    InvariantViolation(Vec<String>),

    #[error("maximizing-dimension table is inconsistent: {0}")]
    InconsistentTable(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("function is not analytic (largest negative coefficient norm {max_norm:.3e})")]
    NotAnalytic { max_norm: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_)
            | Error::Json(_)
            | Error::Io { .. }
            | Error::InvalidSymbol(_)
            | Error::InvalidConfig(_) => ErrorClass::Parse,
            Error::AmbiguousSpectrum { .. } => ErrorClass::Ambiguity,
            _ => ErrorClass::Numeric,
        }
    }

    pub(crate) fn shape(op: &'static str, detail: impl Into<String>) -> Self {
        Error::ShapeMismatch {
            op,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
