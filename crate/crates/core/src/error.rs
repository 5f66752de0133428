use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse grouping of errors, used by callers that need to map failures onto
/// exit statuses or retry policies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad input data, bad parameters or unreadable input files.
    Input,
    /// The analysis ran but the data admits no answer (flat signal, no
    /// scaling region, ...).
    Degenerate,
    /// Writing an output failed.
    Output,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: cannot parse {content:?} as a number", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        content: String,
    },

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("manifest schema error: {0}")]
    Schema(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("trajectory diverged at iteration {iteration} (|x| = {value:e})")]
    Divergence { iteration: usize, value: f64 },

    #[error("{what}: need at least {required} samples, got {actual}")]
    Length {
        what: &'static str,
        required: usize,
        actual: usize,
    },

    #[error("shape mismatch: expected dimension {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("ordering error: {0}")]
    Ordering(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("invalid scaling region: {0}")]
    Region(String),

    #[error("no scaling region: {0}")]
    NoScalingRegion(String),

    #[error("inconsistent configuration: {0}")]
    Consistency(String),

    #[error("sample size {got} too small, need at least {needed}")]
    SampleSize { needed: usize, got: usize },

    #[error("report is missing required field `{0}`")]
    MissingField(&'static str),

    #[error("pair {id}: {source}")]
    Pair {
        id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Write { .. } => ErrorClass::Output,
            Error::DegenerateSignal(_)
            | Error::DegenerateFit(_)
            | Error::NoScalingRegion(_) => ErrorClass::Degenerate,
            Error::Pair { source, .. } => source.class(),
            _ => ErrorClass::Input,
        }
    }

    pub(crate) fn in_pair(self, id: &str) -> Error {
        Error::Pair {
            id: id.to_string(),
            source: Box::new(self),
        }
    }
}
