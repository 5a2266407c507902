use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch (expected {expected}, found {found})")]
    Dimension {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{path}:{line}: {msg}")]
    Alist {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("dataset format: {0}")]
    Format(String),
    #[error("node {0} has no incident hyperedge")]
    IsolatedNode(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
