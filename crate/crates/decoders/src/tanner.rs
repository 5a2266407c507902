use qldpc_core::BitMatrix;

/// Bipartite variable/check adjacency of one parity-check matrix, stored as
/// CSR in both directions. Edge `e` is shared by both views, so per-edge
/// messages can be indexed the same way from either side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TannerGraph {
    num_vars: usize,
    num_checks: usize,
    /// Edges grouped by check: `edge_var[e]` for `e` in `check_offsets[c]..check_offsets[c+1]`.
    check_offsets: Vec<usize>,
    edge_var: Vec<usize>,
    edge_check: Vec<usize>,
    /// Edge ids grouped by variable.
    var_offsets: Vec<usize>,
    var_edges: Vec<usize>,
}

impl TannerGraph {
    pub fn new(h: &BitMatrix) -> Self {
        let (m, n) = (h.rows(), h.cols());
        let mut check_offsets = vec![0];
        let mut edge_var = Vec::new();
        let mut edge_check = Vec::new();
        for c in 0..m {
            for v in h.row_support(c) {
                edge_var.push(v);
                edge_check.push(c);
            }
            check_offsets.push(edge_var.len());
        }
        let mut var_offsets = vec![0; n + 1];
        for &v in &edge_var {
            var_offsets[v + 1] += 1;
        }
        for v in 0..n {
            var_offsets[v + 1] += var_offsets[v];
        }
        let mut fill = var_offsets.clone();
        let mut var_edges = vec![0; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v]] = e;
            fill[v] += 1;
        }
        Self {
            num_vars: n,
            num_checks: m,
            check_offsets,
            edge_var,
            edge_check,
            var_offsets,
            var_edges,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_checks(&self) -> usize {
        self.num_checks
    }

    pub fn num_edges(&self) -> usize {
        self.edge_var.len()
    }

    /// Edge ids of check `c`.
    pub fn check_edges(&self, c: usize) -> std::ops::Range<usize> {
        self.check_offsets[c]..self.check_offsets[c + 1]
    }

    /// Edge ids of variable `v`.
    pub fn var_edges(&self, v: usize) -> &[usize] {
        &self.var_edges[self.var_offsets[v]..self.var_offsets[v + 1]]
    }

    pub fn edge_var(&self, e: usize) -> usize {
        self.edge_var[e]
    }

    pub fn edge_check(&self, e: usize) -> usize {
        self.edge_check[e]
    }

    pub fn check_degree(&self, c: usize) -> usize {
        self.check_offsets[c + 1] - self.check_offsets[c]
    }

    pub fn var_degree(&self, v: usize) -> usize {
        self.var_offsets[v + 1] - self.var_offsets[v]
    }

    /// Dense matrix with the same nonzeros.
    pub fn to_matrix(&self) -> BitMatrix {
        let mut h = BitMatrix::zeros(self.num_checks, self.num_vars);
        for (&v, &c) in self.edge_var.iter().zip(&self.edge_check) {
            h.set(c, v, true);
        }
        h
    }
}
