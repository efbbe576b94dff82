//! Crate-wide error type.

use std::fmt;
use std::io;
use std::path::PathBuf;

use crate::mrf::Evidence;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug)]
pub enum Error {
    /// A configuration value is out of range or inconsistent.
    Config(String),
    /// Model fitting was asked to run on an empty training set.
    EmptyTrainingSet,
    /// Both unnormalized posterior masses were zero for this evidence, so
    /// the conditional is undefined. Callers must not coerce this to a label.
    UndefinedPosterior { evidence: Evidence },
    /// A metric computation rejected its input.
    Eval(String),
    /// One run of a multi-seed experiment failed; the experiment aborted.
    Run {
        run_index: u64,
        completed: usize,
        source: Box<Error>,
    },
    /// File I/O failure, tagged with the path involved.
    Io { path: PathBuf, source: io::Error },
    /// A file existed but its contents did not match the expected schema.
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Error {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::EmptyTrainingSet => write!(f, "cannot fit a model on an empty training set"),
            Error::UndefinedPosterior { evidence } => {
                write!(f, "undefined posterior (0/0) for evidence {evidence}")
            }
            Error::Eval(msg) => write!(f, "evaluation error: {msg}"),
            Error::Run {
                run_index,
                completed,
                source,
            } => write!(
                f,
                "run {run_index} failed after {completed} completed run(s): {source}"
            ),
            Error::Io { path, source } => write!(f, "{}: {source}", path.display()),
            Error::Parse {
                path,
                line,
                message,
            } => write!(f, "{}:{line}: {message}", path.display()),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io { source, .. } => Some(source),
            Error::Run { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}
