//! Hypergraph attention decoder: one node→hyperedge→node message-passing layer
//! followed by a per-node sigmoid readout.
//!
//! With `f = X·W_v` and hyperedge attributes `S_j = s_j`, `w_j = 1 + s_j`:
//!
//! ```text
//! α_ij  = softmax over j' ∋ i of lrelu(a₁·f_i + S_j'·(s_emb·b₁))
//! m_j   = Σ_{i ∈ j} w_j/B(j) · α_ij · f_i
//! Y'_j  = relu(Y₀(S_j, w_j)·U_es + m_j·U_em + c_e)
//! g_j   = Y'_j·W_e
//! β_ji  = softmax over j' ∋ i of lrelu(a₂·g_j' + S_j'·(s_emb·b₂))
//! m_i   = Σ_{j ∋ i} w_j/D(i) · β_ji · g_j,    D(i) = Σ_{j ∋ i} w_j
//! X'_i  = relu(f_i·U_vs + m_i·U_vm + c_v)
//! p_i   = sigmoid(X'_i·w_out + b_out)
//! ```
//!
//! The tape evaluates the same quantities in reassociated form: `m_j·U_em` is
//! accumulated from the per-node rows of `f·U_em`, and `m_i·U_vm` from the rows
//! of `Y'·(W_e·U_vm)`, so the only per-sample dense product is `Y'·(W_e·U_vm)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use qldpc_core::{BitVector, Decoder, Hypergraph};
use qldpc_tensor::{Checkpoint, CheckpointHeader, ParamId, ParamSet, Real, Tape, Tensor, Var};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{DecoderError, Result};
use crate::neural::{
    column, edge_state_table, BatchIndex, FeatureEncoder, NeuralModel, LEAKY_SLOPE,
};

pub const ARCH: &str = "hypernq-v1";
pub const DEFAULT_HIDDEN: usize = 128;

/// Parameter handles, named after their role.
#[derive(Clone, Copy, Debug)]
pub struct HyperNqParams {
    pub node_embed: ParamId,
    pub edge_init_w: ParamId,
    pub edge_init_b: ParamId,
    pub syndrome_embed: ParamId,
    pub stage1_att_node: ParamId,
    pub stage1_att_syndrome: ParamId,
    pub edge_update_state: ParamId,
    pub edge_update_msg: ParamId,
    pub edge_update_b: ParamId,
    pub edge_transform: ParamId,
    pub stage2_att_edge: ParamId,
    pub stage2_att_syndrome: ParamId,
    pub node_update_state: ParamId,
    pub node_update_msg: ParamId,
    pub node_update_b: ParamId,
    pub readout_w: ParamId,
    pub readout_b: ParamId,
}

impl HyperNqParams {
    fn build<T: Real>(ps: &mut ParamSet<T>, c1: usize, d: usize, rng: &mut ChaCha8Rng) -> Self {
        Self {
            node_embed: ps.add_weight("node_embed", c1, d, rng),
            edge_init_w: ps.add_weight("edge_init_w", 2, d, rng),
            edge_init_b: ps.add_bias("edge_init_b", d),
            syndrome_embed: ps.add_weight("syndrome_embed", 1, d, rng),
            stage1_att_node: ps.add_weight("stage1_att_node", d, 1, rng),
            stage1_att_syndrome: ps.add_weight("stage1_att_syndrome", d, 1, rng),
            edge_update_state: ps.add_weight("edge_update_state", d, d, rng),
            edge_update_msg: ps.add_weight("edge_update_msg", d, d, rng),
            edge_update_b: ps.add_bias("edge_update_b", d),
            edge_transform: ps.add_weight("edge_transform", d, d, rng),
            stage2_att_edge: ps.add_weight("stage2_att_edge", d, 1, rng),
            stage2_att_syndrome: ps.add_weight("stage2_att_syndrome", d, 1, rng),
            node_update_state: ps.add_weight("node_update_state", d, d, rng),
            node_update_msg: ps.add_weight("node_update_msg", d, d, rng),
            node_update_b: ps.add_bias("node_update_b", d),
            readout_w: ps.add_weight("readout_w", d, 1, rng),
            readout_b: ps.add_bias("readout_b", 1),
        }
    }
}

/// Tape handles for the intermediate results of one batched layer evaluation.
#[derive(Clone, Copy, Debug)]
pub struct LayerOutputs {
    /// Stage-1 attention per incidence pair, `(batch · I) × 1`.
    pub alpha: Var,
    /// Updated hyperedge features `Y'`, `(batch · m) × d`.
    pub edge_features: Var,
    /// Stage-2 attention per incidence pair.
    pub beta: Var,
    /// Updated node features `X'`, `(batch · 2n) × d`.
    pub node_features: Var,
    /// Per-node flip probabilities, `(batch · 2n) × 1`.
    pub probs: Var,
}

#[derive(Clone, Debug)]
pub struct HyperNq<T> {
    graph: Hypergraph,
    encoder: FeatureEncoder,
    node_features: Tensor<T>,
    hidden: usize,
    seed: u64,
    params: ParamSet<T>,
    ids: HyperNqParams,
    inv_edge_degree: Vec<f64>,
}

impl<T: Real> HyperNq<T> {
    /// Fresh model with Glorot-initialized weights and zero biases.
    pub fn new(
        graph: Hypergraph,
        encoder: FeatureEncoder,
        hidden: usize,
        seed: u64,
    ) -> Result<Self> {
        if encoder.num_nodes != graph.num_nodes() {
            return Err(DecoderError::Config(format!(
                "encoder covers {} nodes, hypergraph has {}",
                encoder.num_nodes,
                graph.num_nodes()
            )));
        }
        if hidden == 0 {
            return Err(DecoderError::Config(
                "hidden dimension must be positive".into(),
            ));
        }
        // Every node needs an incident hyperedge for both softmaxes and D(i).
        graph.weighted_degrees(&vec![1.0; graph.num_edges()])?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = ParamSet::new();
        let ids = HyperNqParams::build(&mut params, encoder.width(), hidden, &mut rng);
        let inv_edge_degree = graph.inv_edge_degrees();
        Ok(Self {
            node_features: encoder.encode(),
            graph,
            encoder,
            hidden,
            seed,
            params,
            ids,
            inv_edge_degree,
        })
    }

    pub fn from_checkpoint(graph: Hypergraph, ck: &Checkpoint<T>) -> Result<Self> {
        let h = &ck.header;
        if h.arch != ARCH {
            return Err(DecoderError::Checkpoint(format!(
                "architecture {:?}, expected {ARCH:?}",
                h.arch
            )));
        }
        let encoder = FeatureEncoder::from_metadata(&h.metadata)?;
        if encoder.width() != h.c1 as usize || h.c2 != h.d {
            return Err(DecoderError::Checkpoint(
                "inconsistent feature dimensions".into(),
            ));
        }
        if encoder.num_nodes != graph.num_nodes() {
            return Err(DecoderError::Checkpoint(format!(
                "checkpoint is for {} nodes, code has {}",
                encoder.num_nodes,
                graph.num_nodes()
            )));
        }
        let mut model = Self::new(graph, encoder, h.d as usize, h.seed)?;
        ck.load_into(&mut model.params)?;
        Ok(model)
    }

    pub fn encoder(&self) -> &FeatureEncoder {
        &self.encoder
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn ids(&self) -> &HyperNqParams {
        &self.ids
    }

    pub fn node_features(&self) -> &Tensor<T> {
        &self.node_features
    }

    /// Overrides the node feature matrix (same shape). Used to test the layer on
    /// feature assignments the index encoder cannot produce.
    pub fn set_node_features(&mut self, x: Tensor<T>) -> Result<()> {
        if x.shape() != self.node_features.shape() {
            return Err(DecoderError::Config(format!(
                "node features must be {:?}, got {:?}",
                self.node_features.shape(),
                x.shape()
            )));
        }
        self.node_features = x;
        Ok(())
    }

    /// Same weights on another element type (for gradient checks in `f64`).
    pub fn cast<U: Real>(&self) -> HyperNq<U> {
        HyperNq {
            graph: self.graph.clone(),
            encoder: self.encoder.clone(),
            node_features: self.node_features.cast(),
            hidden: self.hidden,
            seed: self.seed,
            params: self.params.cast(),
            ids: self.ids,
            inv_edge_degree: self.inv_edge_degree.clone(),
        }
    }

    /// Records the layer for a batch of syndromes on `tape`.
    pub fn forward_layer(
        &self,
        tape: &mut Tape<T>,
        syndromes: &[&BitVector],
    ) -> Result<LayerOutputs> {
        let g = &self.graph;
        let (n, m) = (g.num_nodes(), g.num_edges());
        let batch = syndromes.len();
        let idx = BatchIndex::new(g, syndromes)?;
        let ids = &self.ids;
        let p = |tape: &mut Tape<T>, id| tape.param(&self.params, id);

        // Per-pair constants: w_j / B(j), w_j / D(i), and S_j.
        let nnz = g.nnz();
        let mut coef_edge = Vec::with_capacity(batch * nnz);
        let mut coef_node = Vec::with_capacity(batch * nnz);
        let mut weighted_degree = vec![0.0; n];
        for (b, _) in syndromes.iter().enumerate() {
            let bits = &idx.pair_bit[b * nnz..(b + 1) * nnz];
            weighted_degree.iter_mut().for_each(|d| *d = 0.0);
            for (k, (&i, &j)) in g.pair_nodes().iter().zip(g.pair_edges()).enumerate() {
                let w = 1.0 + bits[k];
                weighted_degree[i] += w;
                coef_edge.push(w * self.inv_edge_degree[j]);
            }
            for (k, &i) in g.pair_nodes().iter().enumerate() {
                coef_node.push((1.0 + bits[k]) / weighted_degree[i]);
            }
        }
        let coef_edge = tape.constant(column(coef_edge));
        let coef_node = tape.constant(column(coef_node));
        let pair_bit = tape.constant(column(idx.pair_bit.iter().copied()));

        // Batch-invariant tables.
        let x = tape.constant(self.node_features.clone());
        let w_v = p(tape, ids.node_embed);
        let f = tape.matmul(x, w_v)?;
        let states = tape.constant(edge_state_table());
        let init_w = p(tape, ids.edge_init_w);
        let init_b = p(tape, ids.edge_init_b);
        let y0 = tape.matmul(states, init_w)?;
        let y0 = tape.add_row(y0, init_b)?;
        let upd_state = p(tape, ids.edge_update_state);
        let y0_proj = tape.matmul(y0, upd_state)?;
        let upd_msg = p(tape, ids.edge_update_msg);
        let f_proj = tape.matmul(f, upd_msg)?;
        let s_emb = p(tape, ids.syndrome_embed);

        // Stage 1: node -> hyperedge.
        let a1 = p(tape, ids.stage1_att_node);
        let node_score = tape.matmul(f, a1)?;
        let b1 = p(tape, ids.stage1_att_syndrome);
        let syn1 = tape.matmul(s_emb, b1)?;
        let alpha = self.attention(
            tape,
            node_score,
            &idx.pair_node,
            pair_bit,
            syn1,
            &idx,
            batch,
        )?;
        let coef = tape.mul_rows(alpha, coef_edge)?;
        let msg = tape.gather_scatter(
            f_proj,
            coef,
            idx.pair_node.clone(),
            idx.pair_edge_batched.clone(),
            batch * m,
        )?;
        let state = tape.gather(y0_proj, idx.edge_bit.clone())?;
        let edge_b = p(tape, ids.edge_update_b);
        let edge_features = tape.add_bias_relu(state, msg, edge_b)?;

        // Stage 2: hyperedge -> node.
        let w_e = p(tape, ids.edge_transform);
        let a2 = p(tape, ids.stage2_att_edge);
        let a2_proj = tape.matmul(w_e, a2)?;
        let edge_score = tape.matmul(edge_features, a2_proj)?;
        let b2 = p(tape, ids.stage2_att_syndrome);
        let syn2 = tape.matmul(s_emb, b2)?;
        let beta = self.attention(
            tape,
            edge_score,
            &idx.pair_edge_batched,
            pair_bit,
            syn2,
            &idx,
            batch,
        )?;
        let node_msg_w = p(tape, ids.node_update_msg);
        let combined = tape.matmul(w_e, node_msg_w)?;
        let edge_proj = tape.matmul(edge_features, combined)?;
        let coef = tape.mul_rows(beta, coef_node)?;
        let msg = tape.gather_scatter(
            edge_proj,
            coef,
            idx.pair_edge_batched.clone(),
            idx.pair_node_batched.clone(),
            batch * n,
        )?;
        let node_state_w = p(tape, ids.node_update_state);
        let node_state = tape.matmul(f, node_state_w)?;
        let state = tape.gather(node_state, idx.node_tile.clone())?;
        let node_b = p(tape, ids.node_update_b);
        let node_features = tape.add_bias_relu(state, msg, node_b)?;

        let w_out = p(tape, ids.readout_w);
        let b_out = p(tape, ids.readout_b);
        let logits = tape.matmul(node_features, w_out)?;
        let logits = tape.add_row(logits, b_out)?;
        let probs = tape.sigmoid(logits)?;
        Ok(LayerOutputs {
            alpha,
            edge_features,
            beta,
            node_features,
            probs,
        })
    }

    /// Per-pair softmax over each node's incident hyperedges of
    /// `lrelu(score[key[p]] + S_p · syndrome_weight)`.
    #[allow(clippy::too_many_arguments)]
    fn attention(
        &self,
        tape: &mut Tape<T>,
        score: Var,
        key: &Arc<[usize]>,
        pair_bit: Var,
        syndrome_weight: Var,
        idx: &BatchIndex,
        batch: usize,
    ) -> Result<Var> {
        let base = tape.gather(score, key.clone())?;
        let syn = tape.matmul(pair_bit, syndrome_weight)?;
        let raw = tape.add(base, syn)?;
        let act = tape.leaky_relu(raw, T::of(LEAKY_SLOPE))?;
        Ok(tape.segment_softmax(
            act,
            idx.pair_node_batched.clone(),
            batch * self.graph.num_nodes(),
        )?)
    }
}

impl<T: Real> NeuralModel<T> for HyperNq<T> {
    fn arch(&self) -> &'static str {
        ARCH
    }

    fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    fn params(&self) -> &ParamSet<T> {
        &self.params
    }

    fn params_mut(&mut self) -> &mut ParamSet<T> {
        &mut self.params
    }

    fn forward(&self, tape: &mut Tape<T>, syndromes: &[&BitVector]) -> Result<Var> {
        Ok(self.forward_layer(tape, syndromes)?.probs)
    }

    fn checkpoint_header(&self) -> CheckpointHeader {
        let mut metadata = BTreeMap::new();
        self.encoder.write_metadata(&mut metadata);
        metadata.insert("num_edges".into(), self.graph.num_edges().to_string());
        CheckpointHeader {
            arch: ARCH.into(),
            c1: self.encoder.width() as u32,
            c2: self.hidden as u32,
            d: self.hidden as u32,
            seed: self.seed,
            metadata,
        }
    }
}

impl Decoder for HyperNq<f32> {
    fn name(&self) -> &str {
        "hypernq"
    }

    fn decode(&self, syndrome: &BitVector) -> BitVector {
        self.decode_one(syndrome)
            .expect("syndrome length matches the code")
            .error
    }

    fn decode_batch(&self, syndromes: &[BitVector]) -> Vec<BitVector> {
        let refs: Vec<&BitVector> = syndromes.iter().collect();
        self.predict(&refs)
            .expect("syndrome length matches the code")
            .iter()
            .map(|p| crate::neural::threshold(p))
            .collect()
    }
}
