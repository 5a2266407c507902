//! Tanner-graph GNN baseline: alternating check and variable updates with
//! mean aggregation, the same node features and readout as the hypergraph
//! decoder. This is a generic stand-in, not a reproduction of any published
//! architecture.

use std::collections::BTreeMap;

use qldpc_core::{BitVector, Decoder, Hypergraph};
use qldpc_tensor::{Checkpoint, CheckpointHeader, ParamId, ParamSet, Real, Tape, Tensor, Var};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{DecoderError, Result};
use crate::neural::{column, edge_state_table, BatchIndex, FeatureEncoder, NeuralModel};

pub const ARCH: &str = "tanner-gnn-v1";
pub const DEFAULT_LAYERS: usize = 6;

#[derive(Clone, Copy, Debug)]
struct LayerIds {
    check_self: ParamId,
    check_msg: ParamId,
    check_b: ParamId,
    var_self: ParamId,
    var_msg: ParamId,
    var_b: ParamId,
}

#[derive(Clone, Debug)]
pub struct TannerGnn<T> {
    /// The Tanner graph of the block stabilizer matrix: variables are the `2n`
    /// nodes, checks the `m` hyperedges.
    graph: Hypergraph,
    encoder: FeatureEncoder,
    node_features: Tensor<T>,
    hidden: usize,
    seed: u64,
    params: ParamSet<T>,
    input_w: ParamId,
    check_init_w: ParamId,
    check_init_b: ParamId,
    layers: Vec<LayerIds>,
    readout_w: ParamId,
    readout_b: ParamId,
    inv_check_degree: Vec<f64>,
    inv_var_degree: Vec<f64>,
}

impl<T: Real> TannerGnn<T> {
    pub fn new(
        graph: Hypergraph,
        encoder: FeatureEncoder,
        hidden: usize,
        layers: usize,
        seed: u64,
    ) -> Result<Self> {
        if encoder.num_nodes != graph.num_nodes() {
            return Err(DecoderError::Config(
                "encoder and graph disagree on node count".into(),
            ));
        }
        if hidden == 0 || layers == 0 {
            return Err(DecoderError::Config(
                "hidden size and layer count must be positive".into(),
            ));
        }
        graph.weighted_degrees(&vec![1.0; graph.num_edges()])?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ps = ParamSet::new();
        let input_w = ps.add_weight("input_w", encoder.width(), hidden, &mut rng);
        let check_init_w = ps.add_weight("check_init_w", 2, hidden, &mut rng);
        let check_init_b = ps.add_bias("check_init_b", hidden);
        let layer_ids = (0..layers)
            .map(|l| LayerIds {
                check_self: ps.add_weight(format!("layer{l}_check_self"), hidden, hidden, &mut rng),
                check_msg: ps.add_weight(format!("layer{l}_check_msg"), hidden, hidden, &mut rng),
                check_b: ps.add_bias(format!("layer{l}_check_b"), hidden),
                var_self: ps.add_weight(format!("layer{l}_var_self"), hidden, hidden, &mut rng),
                var_msg: ps.add_weight(format!("layer{l}_var_msg"), hidden, hidden, &mut rng),
                var_b: ps.add_bias(format!("layer{l}_var_b"), hidden),
            })
            .collect();
        let readout_w = ps.add_weight("readout_w", hidden, 1, &mut rng);
        let readout_b = ps.add_bias("readout_b", 1);
        let inv_check_degree = graph.inv_edge_degrees();
        let inv_var_degree = (0..graph.num_nodes())
            .map(|i| 1.0 / graph.node_degree(i) as f64)
            .collect();
        Ok(Self {
            node_features: encoder.encode(),
            graph,
            encoder,
            hidden,
            seed,
            params: ps,
            input_w,
            check_init_w,
            check_init_b,
            layers: layer_ids,
            readout_w,
            readout_b,
            inv_check_degree,
            inv_var_degree,
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
        let layers: usize = h
            .metadata
            .get("layers")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| DecoderError::Checkpoint("missing layer count".into()))?;
        if encoder.num_nodes != graph.num_nodes() {
            return Err(DecoderError::Checkpoint(
                "checkpoint is for a different code".into(),
            ));
        }
        let mut model = Self::new(graph, encoder, h.d as usize, layers, h.seed)?;
        ck.load_into(&mut model.params)?;
        Ok(model)
    }

    pub fn num_layers(&self) -> usize {
        self.layers.len()
    }

    pub fn cast<U: Real>(&self) -> TannerGnn<U> {
        TannerGnn {
            graph: self.graph.clone(),
            encoder: self.encoder.clone(),
            node_features: self.node_features.cast(),
            hidden: self.hidden,
            seed: self.seed,
            params: self.params.cast(),
            input_w: self.input_w,
            check_init_w: self.check_init_w,
            check_init_b: self.check_init_b,
            layers: self.layers.clone(),
            readout_w: self.readout_w,
            readout_b: self.readout_b,
            inv_check_degree: self.inv_check_degree.clone(),
            inv_var_degree: self.inv_var_degree.clone(),
        }
    }

    /// `relu(state·W_self + mean(neighbours)·W_msg + b)`, with the mean taken
    /// through `from` → `to` incidence pairs.
    #[allow(clippy::too_many_arguments)]
    fn update(
        &self,
        tape: &mut Tape<T>,
        state: Var,
        neighbours: Var,
        w_self: ParamId,
        w_msg: ParamId,
        bias: ParamId,
        from: &std::sync::Arc<[usize]>,
        to: &std::sync::Arc<[usize]>,
        to_rows: usize,
        inv_degree: Var,
    ) -> Result<Var> {
        let ws = tape.param(&self.params, w_self);
        let wm = tape.param(&self.params, w_msg);
        let b = tape.param(&self.params, bias);
        let own = tape.matmul(state, ws)?;
        let proj = tape.matmul(neighbours, wm)?;
        let msg = tape.gather_scatter(proj, inv_degree, from.clone(), to.clone(), to_rows)?;
        Ok(tape.add_bias_relu(own, msg, b)?)
    }
}

impl<T: Real> NeuralModel<T> for TannerGnn<T> {
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
        let g = &self.graph;
        let (n, m) = (g.num_nodes(), g.num_edges());
        let batch = syndromes.len();
        let idx = BatchIndex::new(g, syndromes)?;
        let nnz = g.nnz();
        let per_pair = |f: &dyn Fn(usize, usize) -> f64| -> Vec<f64> {
            (0..batch)
                .flat_map(|_| {
                    g.pair_nodes()
                        .iter()
                        .zip(g.pair_edges())
                        .map(|(&i, &j)| f(i, j))
                })
                .collect()
        };
        let to_check = tape.constant(column(per_pair(&|_, j| self.inv_check_degree[j])));
        let to_var = tape.constant(column(per_pair(&|i, _| self.inv_var_degree[i])));
        debug_assert_eq!(tape.shape(to_check).0, batch * nnz);

        let x = tape.constant(self.node_features.clone());
        let w_in = tape.param(&self.params, self.input_w);
        let f = tape.matmul(x, w_in)?;
        let mut var = tape.gather(f, idx.node_tile.clone())?;
        let states = tape.constant(edge_state_table());
        let cw = tape.param(&self.params, self.check_init_w);
        let cb = tape.param(&self.params, self.check_init_b);
        let table = tape.matmul(states, cw)?;
        let table = tape.add_row(table, cb)?;
        let mut check = tape.gather(table, idx.edge_bit.clone())?;
        for layer in &self.layers {
            check = self.update(
                tape,
                check,
                var,
                layer.check_self,
                layer.check_msg,
                layer.check_b,
                &idx.pair_node_batched,
                &idx.pair_edge_batched,
                batch * m,
                to_check,
            )?;
            var = self.update(
                tape,
                var,
                check,
                layer.var_self,
                layer.var_msg,
                layer.var_b,
                &idx.pair_edge_batched,
                &idx.pair_node_batched,
                batch * n,
                to_var,
            )?;
        }
        let w_out = tape.param(&self.params, self.readout_w);
        let b_out = tape.param(&self.params, self.readout_b);
        let logits = tape.matmul(var, w_out)?;
        let logits = tape.add_row(logits, b_out)?;
        Ok(tape.sigmoid(logits)?)
    }

    fn checkpoint_header(&self) -> CheckpointHeader {
        let mut metadata = BTreeMap::new();
        self.encoder.write_metadata(&mut metadata);
        metadata.insert("layers".into(), self.layers.len().to_string());
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

impl Decoder for TannerGnn<f32> {
    fn name(&self) -> &str {
        "gnn"
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
