//! Qubit–stabilizer incidence hypergraph.
//!
//! Nodes `0..n` are the X components of the qubits and nodes `n..2n` the Z
//! components. Hyperedges `0..m_x` are the X checks (rows of `H_X`, touching Z
//! components) and `m_x..m` the Z checks (rows of `H_Z`, touching X components).

use crate::codes::CssCode;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector};

/// Incidence structure stored as parallel `(node, hyperedge)` arrays grouped by
/// hyperedge, plus a transposed index grouping the same pairs by node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    num_nodes: usize,
    num_edges: usize,
    pair_node: Vec<usize>,
    pair_edge: Vec<usize>,
    edge_offsets: Vec<usize>,
    /// Pair indices sorted by node, then hyperedge.
    node_pairs: Vec<usize>,
    node_offsets: Vec<usize>,
}

impl Hypergraph {
    /// Builds a hypergraph from per-hyperedge node lists. Node lists are sorted;
    /// empty hyperedges, duplicates and out-of-range nodes are rejected.
    pub fn new(num_nodes: usize, edges: &[Vec<usize>]) -> Result<Self> {
        let mut pair_node = Vec::new();
        let mut pair_edge = Vec::new();
        let mut edge_offsets = vec![0];
        for (j, nodes) in edges.iter().enumerate() {
            let mut nodes = nodes.clone();
            nodes.sort_unstable();
            if nodes.is_empty() {
                return Err(Error::InvalidCode(format!("hyperedge {j} is empty")));
            }
            if nodes.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidCode(format!("hyperedge {j} repeats a node")));
            }
            if let Some(&bad) = nodes.iter().find(|&&i| i >= num_nodes) {
                return Err(Error::InvalidCode(format!(
                    "hyperedge {j} references node {bad} >= {num_nodes}"
                )));
            }
            for i in nodes {
                pair_node.push(i);
                pair_edge.push(j);
            }
            edge_offsets.push(pair_node.len());
        }
        let mut node_pairs: Vec<usize> = (0..pair_node.len()).collect();
        node_pairs.sort_by_key(|&p| (pair_node[p], pair_edge[p]));
        let mut node_offsets = vec![0; num_nodes + 1];
        for &i in &pair_node {
            node_offsets[i + 1] += 1;
        }
        for i in 0..num_nodes {
            node_offsets[i + 1] += node_offsets[i];
        }
        Ok(Self {
            num_nodes,
            num_edges: edges.len(),
            pair_node,
            pair_edge,
            edge_offsets,
            node_pairs,
            node_offsets,
        })
    }

    /// Hypergraph of the block stabilizer matrix of a CSS code.
    pub fn from_css(code: &CssCode) -> Self {
        let n = code.n();
        let edges: Vec<Vec<usize>> = (0..code.m_x())
            .map(|r| {
                code.hx()
                    .row_support(r)
                    .into_iter()
                    .map(|c| n + c)
                    .collect()
            })
            .chain((0..code.m_z()).map(|r| code.hz().row_support(r)))
            .collect();
        Self::new(2 * n, &edges).expect("stabilizer rows are nonempty and duplicate-free")
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    /// Number of incidences `I`.
    pub fn nnz(&self) -> usize {
        self.pair_node.len()
    }

    /// Node index of every incidence pair, grouped by hyperedge.
    pub fn pair_nodes(&self) -> &[usize] {
        &self.pair_node
    }

    /// Hyperedge index of every incidence pair.
    pub fn pair_edges(&self) -> &[usize] {
        &self.pair_edge
    }

    /// Pair indices belonging to hyperedge `j`.
    pub fn edge_pairs(&self, j: usize) -> std::ops::Range<usize> {
        self.edge_offsets[j]..self.edge_offsets[j + 1]
    }

    pub fn edge_nodes(&self, j: usize) -> &[usize] {
        &self.pair_node[self.edge_pairs(j)]
    }

    /// Pair indices incident to node `i`, ordered by hyperedge.
    pub fn node_pairs(&self, i: usize) -> &[usize] {
        &self.node_pairs[self.node_offsets[i]..self.node_offsets[i + 1]]
    }

    pub fn node_edges(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.node_pairs(i).iter().map(|&p| self.pair_edge[p])
    }

    /// `B(j)`, the number of nodes in hyperedge `j`.
    pub fn edge_degree(&self, j: usize) -> usize {
        self.edge_offsets[j + 1] - self.edge_offsets[j]
    }

    pub fn node_degree(&self, i: usize) -> usize {
        self.node_offsets[i + 1] - self.node_offsets[i]
    }

    /// `B⁻¹(j)` for every hyperedge.
    pub fn inv_edge_degrees(&self) -> Vec<f64> {
        (0..self.num_edges)
            .map(|j| 1.0 / self.edge_degree(j) as f64)
            .collect()
    }

    /// `D(i) = Σ_{j ∋ i} w_j`.
    pub fn weighted_degree(&self, weights: &[f64], i: usize) -> Result<f64> {
        if weights.len() != self.num_edges {
            return Err(Error::Dimension {
                op: "weighted_degree",
                expected: self.num_edges,
                found: weights.len(),
            });
        }
        if self.node_degree(i) == 0 {
            return Err(Error::IsolatedNode(i));
        }
        Ok(self.node_edges(i).map(|j| weights[j]).sum())
    }

    /// `D(i)` for every node; fails if any node is isolated.
    pub fn weighted_degrees(&self, weights: &[f64]) -> Result<Vec<f64>> {
        (0..self.num_nodes)
            .map(|i| self.weighted_degree(weights, i))
            .collect()
    }

    /// Dense `2n × m` incidence matrix.
    pub fn incidence(&self) -> BitMatrix {
        let mut h = BitMatrix::zeros(self.num_nodes, self.num_edges);
        for (&i, &j) in self.pair_node.iter().zip(&self.pair_edge) {
            h.set(i, j, true);
        }
        h
    }
}

/// Per-hyperedge state derived from a syndrome: attribute `S_j = s_j` and
/// weight `w_j = 1 + s_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeState {
    pub weights: Vec<f64>,
    pub attributes: Vec<f64>,
}

impl EdgeState {
    pub fn from_syndrome(syndrome: &BitVector) -> Self {
        let attributes: Vec<f64> = syndrome.iter().map(|b| if b { 1.0 } else { 0.0 }).collect();
        let weights = attributes.iter().map(|s| 1.0 + s).collect();
        Self {
            weights,
            attributes,
        }
    }
}
