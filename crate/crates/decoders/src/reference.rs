//! Straight-loop evaluator of the hypergraph attention layer, written directly
//! from the per-node and per-hyperedge sums with no gather/scatter and no
//! reassociation. It exists to cross-check [`crate::HyperNq`].

use qldpc_core::{BitVector, Hypergraph};
use qldpc_tensor::{ParamId, ParamSet, Tensor};

use crate::hypernq::HyperNq;
use crate::neural::LEAKY_SLOPE;

/// Every intermediate of one single-sample evaluation.
#[derive(Clone, Debug)]
pub struct DenseLayer {
    /// `alpha[i][k]`: attention of node `i` on its `k`-th incident hyperedge
    /// (hyperedges in increasing order).
    pub alpha: Vec<Vec<f64>>,
    pub beta: Vec<Vec<f64>>,
    /// Raw aggregated messages `m_j`, before the update map.
    pub edge_messages: Vec<Vec<f64>>,
    pub edge_features: Vec<Vec<f64>>,
    pub node_messages: Vec<Vec<f64>>,
    pub node_features: Vec<Vec<f64>>,
    pub probs: Vec<f64>,
}

fn mat(ps: &ParamSet<f64>, id: ParamId) -> &Tensor<f64> {
    ps.value(id)
}

/// `v · W` for a row vector `v`.
fn vec_mat(v: &[f64], w: &Tensor<f64>) -> Vec<f64> {
    assert_eq!(v.len(), w.rows());
    (0..w.cols())
        .map(|c| (0..w.rows()).map(|r| v[r] * w.get(r, c)).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn column_of(t: &Tensor<f64>) -> Vec<f64> {
    assert_eq!(t.cols(), 1);
    t.data().to_vec()
}

fn leaky(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        LEAKY_SLOPE * x
    }
}

fn softmax(xs: &[f64]) -> Vec<f64> {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = xs.iter().map(|x| (x - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.iter().map(|e| e / total).collect()
}

/// Evaluates the layer for one syndrome with the model's current weights.
pub fn dense_layer(model: &HyperNq<f64>, syndrome: &BitVector) -> DenseLayer {
    let ps = crate::neural::NeuralModel::params(model);
    let ids = model.ids();
    let graph: &Hypergraph = crate::neural::NeuralModel::graph(model);
    let (n, m) = (graph.num_nodes(), graph.num_edges());
    let x = model.node_features();
    let d = model.hidden();

    let s: Vec<f64> = (0..m)
        .map(|j| if syndrome.get(j) { 1.0 } else { 0.0 })
        .collect();
    let w: Vec<f64> = s.iter().map(|v| 1.0 + v).collect();
    let incident: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..m)
                .filter(|&j| graph.edge_nodes(j).contains(&i))
                .collect()
        })
        .collect();

    let f: Vec<Vec<f64>> = (0..n)
        .map(|i| vec_mat(x.row(i), mat(ps, ids.node_embed)))
        .collect();
    let s_emb = mat(ps, ids.syndrome_embed).row(0).to_vec();
    let y0: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let mut y = vec_mat(&[s[j], w[j]], mat(ps, ids.edge_init_w));
            for (a, b) in y.iter_mut().zip(mat(ps, ids.edge_init_b).row(0)) {
                *a += b;
            }
            y
        })
        .collect();

    // Stage 1.
    let a1 = column_of(mat(ps, ids.stage1_att_node));
    let b1 = column_of(mat(ps, ids.stage1_att_syndrome));
    let score1 = |i: usize, j: usize| leaky(dot(&a1, &f[i]) + s[j] * dot(&b1, &s_emb));
    let alpha: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            softmax(
                &incident[i]
                    .iter()
                    .map(|&j| score1(i, j))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let attention = |att: &Vec<Vec<f64>>, i: usize, j: usize| {
        let k = incident[i].iter().position(|&e| e == j).expect("incident");
        att[i][k]
    };
    let mut edge_messages = vec![vec![0.0; d]; m];
    for (j, msg) in edge_messages.iter_mut().enumerate() {
        let inv_b = 1.0 / graph.edge_degree(j) as f64;
        for &i in graph.edge_nodes(j) {
            let c = inv_b * w[j] * attention(&alpha, i, j);
            for (acc, v) in msg.iter_mut().zip(&f[i]) {
                *acc += c * v;
            }
        }
    }
    let edge_features: Vec<Vec<f64>> = (0..m)
        .map(|j| {
            let a = vec_mat(&y0[j], mat(ps, ids.edge_update_state));
            let b = vec_mat(&edge_messages[j], mat(ps, ids.edge_update_msg));
            let bias = mat(ps, ids.edge_update_b).row(0);
            (0..d).map(|c| (a[c] + b[c] + bias[c]).max(0.0)).collect()
        })
        .collect();

    // Stage 2.
    let g: Vec<Vec<f64>> = edge_features
        .iter()
        .map(|y| vec_mat(y, mat(ps, ids.edge_transform)))
        .collect();
    let a2 = column_of(mat(ps, ids.stage2_att_edge));
    let b2 = column_of(mat(ps, ids.stage2_att_syndrome));
    let score2 = |j: usize| leaky(dot(&a2, &g[j]) + s[j] * dot(&b2, &s_emb));
    let beta: Vec<Vec<f64>> = (0..n)
        .map(|i| softmax(&incident[i].iter().map(|&j| score2(j)).collect::<Vec<_>>()))
        .collect();
    let mut node_messages = vec![vec![0.0; d]; n];
    for (i, msg) in node_messages.iter_mut().enumerate() {
        let degree: f64 = incident[i].iter().map(|&j| w[j]).sum();
        for &j in &incident[i] {
            let c = w[j] / degree * attention(&beta, i, j);
            for (acc, v) in msg.iter_mut().zip(&g[j]) {
                *acc += c * v;
            }
        }
    }
    let node_features: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let a = vec_mat(&f[i], mat(ps, ids.node_update_state));
            let b = vec_mat(&node_messages[i], mat(ps, ids.node_update_msg));
            let bias = mat(ps, ids.node_update_b).row(0);
            (0..d).map(|c| (a[c] + b[c] + bias[c]).max(0.0)).collect()
        })
        .collect();
    let w_out = column_of(mat(ps, ids.readout_w));
    let b_out = mat(ps, ids.readout_b).data()[0];
    let probs = node_features
        .iter()
        .map(|h| 1.0 / (1.0 + (-(dot(h, &w_out) + b_out)).exp()))
        .collect();
    DenseLayer {
        alpha,
        beta,
        edge_messages,
        edge_features,
        node_messages,
        node_features,
        probs,
    }
}
