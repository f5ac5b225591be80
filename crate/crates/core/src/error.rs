use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// The CLI maps these onto process exit codes with [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field F_{p}^{k} exceeds the supported size (2^31 elements)")]
    FieldTooLarge { p: u32, k: u32 },

    #[error("inversion of zero")]
    DivisionByZero,

    #[error("field mismatch: expected an element of a field with {expected} elements, found one with {found}")]
    FieldMismatch { expected: u64, found: u64 },

    #[error("F_{p}^{sub} is not a subfield of F_{p}^{sup}")]
    NotSubfield { p: u32, sub: u32, sup: u32 },

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Process exit code: 1 verification failure, 2 budget exhaustion,
    /// 3 invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Verification(_) => 1,
            Error::Budget(_) | Error::SearchExhausted(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
