use std::fmt::Display;
use std::path::Path;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or flag combinations.
    #[error("usage: {0}")]
    Usage(String),
    /// Missing, unreadable or inconsistent input files.
    #[error("input: {0}")]
    Input(String),
    #[error("internal: {0}")]
    Internal(String),
    /// A replay produced different bytes.
    #[error("replay mismatch: {0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Internal(_) | CliError::Mismatch(_) => 1,
        }
    }

    pub fn input(path: &Path, e: impl Display) -> Self {
        CliError::Input(format!("{}: {e}", path.display()))
    }

    pub fn io(path: &Path, e: impl Display) -> Self {
        CliError::Internal(format!("{}: {e}", path.display()))
    }
}

macro_rules! internal_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Internal(e.to_string())
            }
        }
    )*};
}

internal_from!(
    qldpc_core::Error,
    qldpc_decoders::DecoderError,
    qldpc_eval::EvalError,
    qldpc_tensor::TensorError,
    std::io::Error
);
