//! Error and diagnostic types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by estimators, simulators and the data pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its admissible range (`k`, `d`, block length, model parameter, ...).
    #[error("invalid parameter `{name}`: {message}")]
    Parameter { name: &'static str, message: String },

    /// The input sample is unusable (empty, non-finite, bad segmentation).
    #[error("invalid data: {0}")]
    Data(String),

    /// Fewer threshold exceedances than the estimator needs.
    #[error("insufficient exceedances: need at least {needed}, found {found}")]
    InsufficientExceedances { needed: usize, found: usize },

    /// Closed-form tail dependence values are unavailable for this model.
    #[error("no closed-form tail dependence values for model `{model}`")]
    UnsupportedModel { model: String },

    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// CSV or file-level problem, with a line number where available.
    #[error("input error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Input { line: Option<u64>, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = match e.kind() {
            csv::ErrorKind::Deserialize { pos, .. } => pos.as_ref().map(|p| p.line()),
            _ => e.position().map(|p| p.line()),
        };
        Error::Input {
            line,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input {
            line: Some(e.line() as u64),
            message: e.to_string(),
        }
    }
}

impl Error {
    pub(crate) fn parameter(name: &'static str, message: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            message: message.into(),
        }
    }
}

/// Non-fatal diagnostics attached to estimation results.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Sample values tied at the threshold: the number of strict exceedances
    /// differs from `k`. Estimates stay deterministic (strict comparisons) but
    /// lose the exact `count = k` normalisation.
    TiesAtThreshold { k: usize, exceedances: usize },
    /// No `h <= d_u` satisfied the selection rule; `d_u + 1` was returned.
    SelectionFailed { d_u: usize },
    /// Degenerate input for the sliding-blocks estimator (all rescaled block
    /// maxima are zero, e.g. a constant series).
    DegenerateBlocks,
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::TiesAtThreshold { k, exceedances } => write!(
                f,
                "ties at the threshold: {exceedances} strict exceedances for k = {k}"
            ),
            Warning::SelectionFailed { d_u } => {
                write!(f, "selection failed within d_u = {d_u}; returned d_u + 1")
            }
            Warning::DegenerateBlocks => write!(f, "degenerate block maxima; estimate unreliable"),
        }
    }
}
