//! Pieces shared by the two neural decoders.

use std::collections::BTreeMap;
use std::sync::Arc;

use qldpc_core::{BitVector, Hypergraph};
use qldpc_tensor::{CheckpointHeader, ParamSet, Real, Tape, Tensor, Var};

use crate::error::{check_len, DecoderError, Result};

/// Slope of the leaky ReLU inside attention scores.
pub const LEAKY_SLOPE: f64 = 0.2;

/// Samples decoded per forward pass at inference time.
pub const INFERENCE_BATCH: usize = 256;

/// Node features: a binary index code of the node, a bit-value slot that is
/// always 0 (the error is unknown when decoding), and optionally a constant
/// channel log-likelihood ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureEncoder {
    pub num_nodes: usize,
    pub index_bits: usize,
    /// Channel LLR `ln((1 - q)/q)` appended as the last column, if set.
    pub llr: Option<f64>,
}

impl FeatureEncoder {
    pub fn new(num_nodes: usize) -> Self {
        Self {
            num_nodes,
            index_bits: index_bits(num_nodes),
            llr: None,
        }
    }

    /// Adds the LLR column for component flip rate `q`.
    pub fn with_llr(mut self, q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(DecoderError::Config(format!(
                "LLR rate {q} is outside (0, 1)"
            )));
        }
        self.llr = Some(((1.0 - q) / q).ln());
        Ok(self)
    }

    /// Feature width `C₁`.
    pub fn width(&self) -> usize {
        self.index_bits + 1 + usize::from(self.llr.is_some())
    }

    /// The `num_nodes × C₁` feature matrix. Index bits are least significant first.
    pub fn encode<T: Real>(&self) -> Tensor<T> {
        let c = self.width();
        let mut x = Tensor::zeros(self.num_nodes, c);
        for i in 0..self.num_nodes {
            for b in 0..self.index_bits {
                if i >> b & 1 == 1 {
                    x.set(i, b, T::one());
                }
            }
            if let Some(llr) = self.llr {
                x.set(i, c - 1, T::of(llr));
            }
        }
        x
    }

    pub(crate) fn write_metadata(&self, meta: &mut BTreeMap<String, String>) {
        meta.insert("num_nodes".into(), self.num_nodes.to_string());
        meta.insert("index_bits".into(), self.index_bits.to_string());
        if let Some(llr) = self.llr {
            meta.insert("llr".into(), format!("{llr:?}"));
        }
    }

    pub(crate) fn from_metadata(meta: &BTreeMap<String, String>) -> Result<Self> {
        let get = |key: &str| {
            meta.get(key)
                .ok_or_else(|| DecoderError::Checkpoint(format!("missing metadata {key:?}")))
        };
        let parse_usize = |key: &str| -> Result<usize> {
            get(key)?
                .parse()
                .map_err(|_| DecoderError::Checkpoint(format!("bad metadata {key:?}")))
        };
        let llr = match meta.get("llr") {
            Some(v) => Some(
                v.parse()
                    .map_err(|_| DecoderError::Checkpoint("bad metadata \"llr\"".into()))?,
            ),
            None => None,
        };
        Ok(Self {
            num_nodes: parse_usize("num_nodes")?,
            index_bits: parse_usize("index_bits")?,
            llr,
        })
    }
}

/// `ceil(log2(count))`, at least 1.
pub fn index_bits(count: usize) -> usize {
    let mut bits = 1;
    while (1usize << bits) < count {
        bits += 1;
    }
    bits
}

/// Outcome of decoding one syndrome with a neural decoder.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    pub error: BitVector,
    pub probs: Vec<f64>,
    /// Whether the estimate reproduces the syndrome. Recorded, not enforced.
    pub syndrome_matched: bool,
}

/// Strict threshold: exactly 0.5 decodes to 0.
pub fn threshold<T: Real>(probs: &[T]) -> BitVector {
    let half = T::of(0.5);
    BitVector::from_bools(probs.iter().map(|&p| p > half))
}

/// Syndrome of a node-level estimate: parity of each hyperedge.
pub fn hyperedge_parities(graph: &Hypergraph, error: &BitVector) -> BitVector {
    BitVector::from_bools((0..graph.num_edges()).map(|j| {
        graph
            .edge_nodes(j)
            .iter()
            .filter(|&&i| error.get(i))
            .count()
            % 2
            == 1
    }))
}

/// A neural decoder expressed on the tape, so training and inference share one
/// forward pass.
pub trait NeuralModel<T: Real>: Sync {
    /// Architecture tag stored in checkpoints.
    fn arch(&self) -> &'static str;

    fn graph(&self) -> &Hypergraph;

    fn params(&self) -> &ParamSet<T>;

    fn params_mut(&mut self) -> &mut ParamSet<T>;

    /// Per-node flip probabilities for a batch, stacked sample by sample into a
    /// `(batch · num_nodes) × 1` column.
    fn forward(&self, tape: &mut Tape<T>, syndromes: &[&BitVector]) -> Result<Var>;

    fn checkpoint_header(&self) -> CheckpointHeader;

    fn num_nodes(&self) -> usize {
        self.graph().num_nodes()
    }

    /// Probabilities for each syndrome, without recording gradients for later use.
    fn predict(&self, syndromes: &[&BitVector]) -> Result<Vec<Vec<T>>> {
        let n = self.num_nodes();
        let mut out = Vec::with_capacity(syndromes.len());
        for chunk in syndromes.chunks(INFERENCE_BATCH) {
            let mut tape = Tape::new();
            let probs = self.forward(&mut tape, chunk)?;
            out.extend(tape.value(probs).data().chunks(n).map(|c| c.to_vec()));
        }
        Ok(out)
    }

    fn decode_one(&self, syndrome: &BitVector) -> Result<DecodeResult> {
        let probs = self.predict(&[syndrome])?.pop().expect("one sample");
        let error = threshold(&probs);
        let syndrome_matched = hyperedge_parities(self.graph(), &error) == *syndrome;
        Ok(DecodeResult {
            error,
            probs: probs.iter().map(|p| p.as_f64()).collect(),
            syndrome_matched,
        })
    }
}

/// Index arrays for one batch, shared by the tape ops as `Arc` slices.
pub(crate) struct BatchIndex {
    /// Per incidence pair (batched): local node id.
    pub pair_node: Arc<[usize]>,
    /// Per pair: batched node id `b·N + i`.
    pub pair_node_batched: Arc<[usize]>,
    /// Per pair: batched hyperedge id `b·M + j`.
    pub pair_edge_batched: Arc<[usize]>,
    /// Per batched hyperedge: syndrome bit as a table row (0 or 1).
    pub edge_bit: Arc<[usize]>,
    /// Per batched node: local node id.
    pub node_tile: Arc<[usize]>,
    /// Per pair: syndrome bit of its hyperedge.
    pub pair_bit: Vec<f64>,
}

impl BatchIndex {
    pub fn new(graph: &Hypergraph, syndromes: &[&BitVector]) -> Result<Self> {
        let (n, m, nnz) = (graph.num_nodes(), graph.num_edges(), graph.nnz());
        let batch = syndromes.len();
        for s in syndromes {
            check_len("syndrome", m, s.len())?;
        }
        let mut pair_node = Vec::with_capacity(batch * nnz);
        let mut pair_node_batched = Vec::with_capacity(batch * nnz);
        let mut pair_edge_batched = Vec::with_capacity(batch * nnz);
        let mut pair_bit = Vec::with_capacity(batch * nnz);
        let mut edge_bit = Vec::with_capacity(batch * m);
        for (b, s) in syndromes.iter().enumerate() {
            for (&i, &j) in graph.pair_nodes().iter().zip(graph.pair_edges()) {
                pair_node.push(i);
                pair_node_batched.push(b * n + i);
                pair_edge_batched.push(b * m + j);
                pair_bit.push(if s.get(j) { 1.0 } else { 0.0 });
            }
            edge_bit.extend(s.iter().map(usize::from));
        }
        Ok(Self {
            pair_node: pair_node.into(),
            pair_node_batched: pair_node_batched.into(),
            pair_edge_batched: pair_edge_batched.into(),
            edge_bit: edge_bit.into(),
            node_tile: (0..batch).flat_map(|_| 0..n).collect::<Vec<_>>().into(),
            pair_bit,
        })
    }
}

/// Rows `[S, w] = [0, 1]` and `[1, 2]`: the two possible hyperedge states.
pub(crate) fn edge_state_table<T: Real>() -> Tensor<T> {
    Tensor::from_f64(2, 2, &[0.0, 1.0, 1.0, 2.0]).expect("2x2")
}

pub(crate) fn column<T: Real>(values: impl IntoIterator<Item = f64>) -> Tensor<T> {
    Tensor::column(values.into_iter().map(T::of).collect())
}
