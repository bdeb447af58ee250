use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A root-system type/rank combination that does not exist.
    #[error("invalid Lie type {lie_type}{rank}: {constraint}")]
    InvalidLieType {
        lie_type: String,
        rank: usize,
        constraint: String,
    },
    #[error("point is not in the fundamental alcove: {0}")]
    NotInAlcove(String),
    /// Seifert invariant violating one of its defining conditions.
    #[error("invalid Seifert data ({field}): {message}")]
    InvalidSeifert { field: &'static str, message: String },
    #[error("{q} is not invertible modulo {p}")]
    NotInvertible { q: i64, p: i64 },
    #[error("invalid homology basis, degree {degree}")]
    InvalidHomologyBasis { degree: usize },
    #[error("not a chain complex: boundary composition nonzero at degree {degree}")]
    NotAComplex { degree: usize },
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-convergent regime; component is 0-dimensional or empty (dim = {dim})")]
    NonConvergent { dim: i64 },
    #[error("Q infinite; the Euler number vanishes")]
    VanishingEuler,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error ({field}): {message}")]
    Parse { field: &'static str, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable code used in CLI error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidLieType { .. } => "group",
            Error::NotInAlcove(_) => "alcove",
            Error::InvalidSeifert { field, .. } => field,
            Error::NotInvertible { .. } => "not-invertible",
            Error::InvalidHomologyBasis { .. } => "homology-basis",
            Error::NotAComplex { .. } => "not-a-complex",
            Error::NotExact(_) => "not-exact",
            Error::Shape(_) => "shape",
            Error::NonConvergent { .. } => "non-convergent",
            Error::VanishingEuler => "euler-zero",
            Error::Unsupported(_) => "unsupported",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
