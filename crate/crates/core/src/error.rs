use thiserror::Error;

/// Errors raised by the GF(2) kernels and the metrics engine when a caller
/// breaks an operation's contract.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected} bits, got {actual}")]
    WidthMismatch { expected: u32, actual: u32 },

    #[error("step mismatch: network consumes {expected} data bits per application, got {actual}")]
    StepMismatch { expected: u32, actual: u32 },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("unknown polynomial `{0}` (expected a name or `poly:<width>:<hex taps>`)")]
    UnknownPolynomial(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("empty input sequence")]
    EmptyInput,

    #[error("invalid bit string `{0}`")]
    InvalidBitString(String),

    #[error("malformed equation listing at line {line}: {reason}")]
    Listing { line: usize, reason: String },

    #[error("invalid metric input: {0}")]
    InvalidMetric(String),

    #[error("unknown report format `{0}`")]
    UnknownFormat(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
