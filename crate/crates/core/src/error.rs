use thiserror::Error;

/// Failures while reading a sequence from one of its serialized forms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("values[{position}]: malformed rational {text:?}")]
    Rational { position: usize, text: String },
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(
        "support not tight: {side} stored value at index {index} is zero (enable trimming to accept)"
    )]
    NotTight { side: &'static str, index: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A transform violated its own tail law; always indicates a bug.
    #[error("internal consistency: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
