use std::io;
use std::path::PathBuf;

use smalp_core::{EngineError, LatticeError, SymbolError, SyntaxError, TuneError};
use thiserror::Error;

/// A malformed line in a cases or domains file. `line` is 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Syntax { path: PathBuf, source: SyntaxError },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("goal: {0}")]
    Goal(SyntaxError),
    #[error("--domain: {0}")]
    InlineDomain(FormatError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Tune(#[from] TuneError),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    /// 2 when a derivation ran out of steps, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(EngineError::DepthLimitExceeded(_))
            | CliError::Tune(TuneError::Engine {
                source: EngineError::DepthLimitExceeded(_),
                ..
            }) => 2,
            _ => 1,
        }
    }
}
