use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Position in a text input, both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{pos}: lexical error: {msg}")]
    Lex { pos: Pos, msg: String },

    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },

    #[error("{pos}: unbalanced parenthesis")]
    Unbalanced { pos: Pos },

    #[error("{pos}: unknown identifier `{name}`")]
    UnknownIdentifier { pos: Pos, name: String },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a permutation matrix: {0}")]
    NotPermutation(String),

    #[error("value {value} of the subspace matrix is never attained (QQ^T is singular)")]
    UnattainedValue { value: usize },

    #[error("{what} exceeded the cap of {limit} (frontier size {frontier})")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        frontier: usize,
    },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("unknown corpus `{0}`")]
    UnknownCorpus(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            _ => 2,
        }
    }
}
