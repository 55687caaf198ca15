use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("malformed word `{0}`")]
    MalformedWord(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("invalid group data: {0}")]
    InvalidGroup(String),
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("transition table not closed: {0}")]
    TableNotClosed(String),
    #[error("graph error: {0}")]
    Graph(String),
    #[error("parse error in {context} at line {line}: {message}")]
    Parse {
        context: String,
        line: usize,
        message: String,
    },
    #[error("not a generating set: {0}")]
    NotGenerating(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("language has no explicit automaton: {0}")]
    NoAutomaton(String),
}

pub type Result<T> = std::result::Result<T, Error>;
