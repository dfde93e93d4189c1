use std::fmt;

use thiserror::Error;

/// Position of a token in a source text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{pos}: {message}")]
    Syntax { pos: Position, message: String },
    #[error("{pos}: unsupported requirement {requirement}")]
    UnsupportedRequirement { pos: Position, requirement: String },
    #[error("{pos}: {message}")]
    Semantic { pos: Position, message: String },
}

impl ParseError {
    pub fn syntax(pos: Position, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            pos,
            message: message.into(),
        }
    }

    pub fn semantic(pos: Position, message: impl Into<String>) -> Self {
        ParseError::Semantic {
            pos,
            message: message.into(),
        }
    }

    pub fn position(&self) -> Position {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UnsupportedRequirement { pos, .. }
            | ParseError::Semantic { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid model: {0}")]
    Model(String),
    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub fn in_file(path: impl Into<String>, err: impl Into<Error>) -> Self {
        Error::File {
            path: path.into(),
            source: Box::new(err.into()),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
