use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("degenerate marginal: symbol {index} has zero probability")]
    DegenerateMarginal { index: usize },

    #[error("positivity violated: {0}")]
    Positivity(String),

    #[error("numerical failure at iteration {iter}: {what}")]
    Numerical { iter: usize, what: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("grid budget exceeded: {required} evaluations required, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("at beta = {beta}: {source}")]
    AtBeta {
        beta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// The innermost error, looking through [`Error::AtBeta`] wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtBeta { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for failures of the numerical iteration itself (as opposed to bad inputs).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self.root(),
            Error::Numerical { .. } | Error::Positivity(_) | Error::DegenerateMarginal { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
