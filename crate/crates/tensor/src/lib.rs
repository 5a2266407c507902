//! Dense row-major tensors with a small reverse-mode tape, Adam, and a binary
//! checkpoint format. The op set covers exactly what the hypergraph attention
//! decoder and the Tanner-graph baseline need.

pub mod checkpoint;
mod error;
pub mod param;
pub mod tape;
mod tensor;

pub use checkpoint::{Checkpoint, CheckpointHeader};
pub use error::{Result, TensorError};
pub use param::{Adam, Param, ParamId, ParamSet};
pub use tape::{Tape, Var};
pub use tensor::{Real, Tensor};
