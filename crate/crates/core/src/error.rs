use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid preference: {0}")]
    InvalidPreference(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid utility function: {0}")]
    InvalidUtility(String),

    #[error("invalid population state: {0}")]
    InvalidState(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid dynamics parameters: {0}")]
    InvalidDynamics(String),

    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),

    #[error("state diverged at t = {time}")]
    Diverged { time: f64 },

    #[error("search cap exceeded: {0}")]
    SearchCapExceeded(String),

    #[error("config parse error at line {line}, column {column}: {message}")]
    ConfigParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid config field `{field}`: {message}")]
    ConfigValidation { field: String, message: String },

    #[error("malformed record: {0}")]
    Record(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ConfigValidation {
            field: field.into(),
            message: message.into(),
        }
    }
}
