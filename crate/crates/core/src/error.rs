use crate::field::FieldSpec;

/// Errors raised by the library. Every variant maps onto one of the
/// process exit codes used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("symbolic letter '{letter}' has total degree {degree}, expected 4")]
    LetterDegree { letter: char, degree: u32 },
    #[error("bracket at byte {offset} repeats the letter '{letter}'")]
    RepeatedLetter { offset: usize, letter: char },
    #[error("singular input: {0}")]
    Singular(String),
    #[error("unsupported characteristic {characteristic}: {reason}")]
    UnsupportedCharacteristic { characteristic: u64, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("normalization error: {0}")]
    Normalization(String),
    #[error("internal consistency error: {0}")]
    Inconsistent(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// Exit code for the CLI: 2 precondition, 3 cap exceeded, 4 internal consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded(_) => 3,
            Error::Inconsistent(_) | Error::Normalization(_) => 4,
            _ => 2,
        }
    }

    pub(crate) fn unsupported(characteristic: u64, reason: impl Into<String>) -> Self {
        Error::UnsupportedCharacteristic {
            characteristic,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
