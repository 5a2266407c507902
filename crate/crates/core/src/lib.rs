//! Code construction and noise machinery for quantum LDPC decoding experiments.

pub mod alist;
pub mod channel;
pub mod codes;
pub mod decoder;
mod error;
pub mod gf2;
pub mod hypergraph;

pub use channel::{ChannelConfig, Dataset, NoiseModel, Sample, TrainDistConfig};
pub use codes::{ClassicalCode, CssCode, ValidationReport};
pub use decoder::Decoder;
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector};
pub use hypergraph::{EdgeState, Hypergraph};
