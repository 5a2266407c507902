use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecoderError {
    #[error(transparent)]
    Core(#[from] qldpc_core::Error),
    #[error(transparent)]
    Tensor(#[from] qldpc_tensor::TensorError),
    #[error("{what}: expected length {expected}, got {found}")]
    Length {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("syndrome is not in the column space of the check matrix")]
    InconsistentSyndrome,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("checkpoint mismatch: {0}")]
    Checkpoint(String),
}

pub type Result<T> = std::result::Result<T, DecoderError>;

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(DecoderError::Length {
            what,
            expected,
            found,
        })
    }
}
