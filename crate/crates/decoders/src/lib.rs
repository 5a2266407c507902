//! Decoders for CSS quantum LDPC codes: the hypergraph attention decoder,
//! syndrome BP, BP+OSD and a Tanner-graph GNN baseline.

pub mod bp;
mod error;
pub mod gnn;
pub mod hypernq;
pub mod neural;
pub mod osd;
pub mod reference;
pub mod tanner;
pub mod train;

pub use bp::{bp_decode, BpConfig, BpResult, CssBp, Schedule};
pub use error::{DecoderError, Result};
pub use gnn::TannerGnn;
pub use hypernq::HyperNq;
pub use neural::{DecodeResult, FeatureEncoder, NeuralModel};
pub use osd::{osd_postprocess, BpOsd, OsdConfig};
pub use tanner::TannerGraph;
pub use train::{train, TrainConfig, TrainReport};
