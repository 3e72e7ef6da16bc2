use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("automaton is bound to {found} vertices but the game has {expected}")]
    Mismatch { expected: usize, found: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("{0} does not realize a chain")]
    NotAChain(String),

    #[error("instance too large for the brute-force oracle: {0}")]
    TooLarge(String),

    #[error("invalid generator configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn syntax(line: usize, reason: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        reason: reason.into(),
    }
}
