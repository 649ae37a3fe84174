use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("enumeration budget exceeded: {what} is {actual}, limit {limit}")]
    Budget {
        what: &'static str,
        actual: u128,
        limit: u128,
    },

    #[error("unsupported structure: {0}")]
    Structure(String),

    #[error("configuration has no component with more than half of the total degree")]
    NoGiantComponent,

    #[error("chain state invalid: {0}")]
    State(String),

    #[error("denominator not certified positive on [{a}, {b}]")]
    Singularity { a: f64, b: f64 },

    #[error("integration domain error: {0}")]
    Domain(String),

    #[error("numeric non-convergence: {0}")]
    Convergence(String),

    #[error("malformed input at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    /// Short machine-readable tag, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parameter(_) => "parameter",
            Error::Budget { .. } => "budget",
            Error::Structure(_) => "structure",
            Error::NoGiantComponent => "no_giant_component",
            Error::State(_) => "state",
            Error::Singularity { .. } => "singularity",
            Error::Domain(_) => "domain",
            Error::Convergence(_) => "convergence",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
