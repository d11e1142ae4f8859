//! File formats, seeded generators, verification suites and the command-line
//! front-end for [`funcount_core`].

pub mod cli;
pub mod corpus;
pub mod formats;
pub mod gen;
pub mod report;
pub mod suites;

use std::path::PathBuf;

/// Errors of the std layer, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] funcount_core::Error),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: Box<Error> },
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Exit statuses shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    pub const COUNTEREXAMPLE: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const BUDGET: i32 = 3;
}

impl Error {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(funcount_core::Error::Budget { .. }) => exit::BUDGET,
            Error::File { source, .. } => source.exit_code(),
            _ => exit::INPUT,
        }
    }
}
