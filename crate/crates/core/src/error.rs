use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("broken complex: {0}")]
    BrokenComplex(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("lower word {indices:?} on base degree {base} reaches negative degree")]
    NegativeDegree { base: i64, indices: Vec<i64> },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("window too small: {0}")]
    Window(String),

    #[error("module has {} relation violation(s); first: {}", .0.len(), .0.first().map(String::as_str).unwrap_or(""))]
    Validation(Vec<String>),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
