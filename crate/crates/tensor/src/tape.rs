//! Reverse-mode differentiation over a closed set of row-wise operations.

use std::sync::Arc;

use crate::error::{Result, TensorError};
use crate::param::{ParamId, ParamSet};
use crate::tensor::{gemm_into, Real, Tensor};

/// Handle to a value recorded on a [`Tape`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Var(usize);

/// Clamp applied to predictions inside the binary cross-entropy.
pub const BCE_EPS: f64 = 1e-7;

enum Op<T> {
    Constant,
    Param(ParamId),
    MatMul(Var, Var),
    Add(Var, Var),
    AddRow(Var, Var),
    Scale(Var, T),
    Relu(Var),
    AddBiasRelu(Var, Var, Var),
    LeakyRelu(Var, T),
    Sigmoid(Var),
    MulRows(Var, Var),
    Gather(Var, Arc<[usize]>),
    ScatterAdd(Var, Arc<[usize]>),
    GatherScatter(Var, Var, Arc<[usize]>, Arc<[usize]>),
    SegmentSoftmax(Var, Arc<[usize]>),
    ConcatCols(Var, Var),
    ConcatRows(Var, Var),
    Bce(Var, Arc<[T]>),
}

impl<T> Op<T> {
    fn name(&self) -> &'static str {
        match self {
            Op::Constant => "constant",
            Op::Param(_) => "param",
            Op::MatMul(..) => "matmul",
            Op::Add(..) => "add",
            Op::AddRow(..) => "add_row",
            Op::Scale(..) => "scale",
            Op::Relu(_) => "relu",
            Op::AddBiasRelu(..) => "add_bias_relu",
            Op::LeakyRelu(..) => "leaky_relu",
            Op::Sigmoid(_) => "sigmoid",
            Op::MulRows(..) => "mul_rows",
            Op::Gather(..) => "gather",
            Op::ScatterAdd(..) => "scatter_add",
            Op::GatherScatter(..) => "gather_scatter",
            Op::SegmentSoftmax(..) => "segment_softmax",
            Op::ConcatCols(..) => "concat_cols",
            Op::ConcatRows(..) => "concat_rows",
            Op::Bce(..) => "bce_loss",
        }
    }
}

struct Node<T> {
    value: Tensor<T>,
    op: Op<T>,
    /// Whether any parameter feeds this node.
    tracked: bool,
}

/// Records a forward computation so that [`Tape::backward`] can replay it in
/// reverse. Gradients reach parameters only; constants are never differentiated.
pub struct Tape<T> {
    nodes: Vec<Node<T>>,
    checked: bool,
}

impl<T: Real> Default for Tape<T> {
    fn default() -> Self {
        Self::new()
    }
}

fn shape_err(op: &'static str, detail: String) -> TensorError {
    TensorError::Shape { op, detail }
}

impl<T: Real> Tape<T> {
    pub fn new() -> Self {
        Self {
            nodes: Vec::new(),
            checked: false,
        }
    }

    /// In checked mode every op verifies its output is finite.
    pub fn checked() -> Self {
        Self {
            nodes: Vec::new(),
            checked: true,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &Tensor<T> {
        &self.nodes[v.0].value
    }

    pub fn shape(&self, v: Var) -> (usize, usize) {
        self.nodes[v.0].value.shape()
    }

    fn push(&mut self, value: Tensor<T>, op: Op<T>) -> Result<Var> {
        if self.checked && !value.all_finite() {
            return Err(TensorError::NonFinite { op: op.name() });
        }
        let tracked = match &op {
            Op::Constant => false,
            Op::Param(_) => true,
            Op::MatMul(a, b)
            | Op::Add(a, b)
            | Op::AddRow(a, b)
            | Op::MulRows(a, b)
            | Op::GatherScatter(a, b, ..)
            | Op::ConcatCols(a, b)
            | Op::ConcatRows(a, b) => self.tracked(*a) || self.tracked(*b),
            Op::AddBiasRelu(a, b, c) => self.tracked(*a) || self.tracked(*b) || self.tracked(*c),
            Op::Scale(a, _)
            | Op::Relu(a)
            | Op::LeakyRelu(a, _)
            | Op::Sigmoid(a)
            | Op::Gather(a, _)
            | Op::ScatterAdd(a, _)
            | Op::SegmentSoftmax(a, _)
            | Op::Bce(a, _) => self.tracked(*a),
        };
        self.nodes.push(Node { value, op, tracked });
        Ok(Var(self.nodes.len() - 1))
    }

    fn tracked(&self, v: Var) -> bool {
        self.nodes[v.0].tracked
    }

    pub fn constant(&mut self, value: Tensor<T>) -> Var {
        self.push(value, Op::Constant)
            .expect("constants are not checked")
    }

    /// Copies the current value of a parameter onto the tape.
    pub fn param(&mut self, params: &ParamSet<T>, id: ParamId) -> Var {
        self.nodes.push(Node {
            value: params.value(id).clone(),
            op: Op::Param(id),
            tracked: true,
        });
        Var(self.nodes.len() - 1)
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.cols() != tb.rows() {
            return Err(shape_err(
                "matmul",
                format!("{:?} x {:?}", ta.shape(), tb.shape()),
            ));
        }
        let mut out = Tensor::zeros(ta.rows(), tb.cols());
        gemm_into(ta, false, tb, false, T::zero(), &mut out);
        self.push(out, Op::MatMul(a, b))
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.shape() != tb.shape() {
            return Err(shape_err(
                "add",
                format!("{:?} + {:?}", ta.shape(), tb.shape()),
            ));
        }
        let mut out = ta.clone();
        out.add_assign(tb);
        self.push(out, Op::Add(a, b))
    }

    /// Adds the `1 × c` row `bias` to every row of `a`.
    pub fn add_row(&mut self, a: Var, bias: Var) -> Result<Var> {
        let (ta, tb) = (self.value(a), self.value(bias));
        if tb.rows() != 1 || tb.cols() != ta.cols() {
            return Err(shape_err(
                "add_row",
                format!("{:?} + {:?}", ta.shape(), tb.shape()),
            ));
        }
        let mut out = ta.clone();
        let b = tb.data();
        for r in 0..out.rows() {
            for (x, &y) in out.row_mut(r).iter_mut().zip(b) {
                *x += y;
            }
        }
        self.push(out, Op::AddRow(a, bias))
    }

    pub fn scale(&mut self, a: Var, k: T) -> Result<Var> {
        let out = self.value(a).map(|x| x * k);
        self.push(out, Op::Scale(a, k))
    }

    pub fn relu(&mut self, a: Var) -> Result<Var> {
        let out = self.value(a).map(|x| x.max(T::zero()));
        self.push(out, Op::Relu(a))
    }

    /// `relu(a + b + bias)` with `bias` a `1 × c` row; one pass instead of three.
    pub fn add_bias_relu(&mut self, a: Var, b: Var, bias: Var) -> Result<Var> {
        let (ta, tb, tc) = (self.value(a), self.value(b), self.value(bias));
        if ta.shape() != tb.shape() || tc.rows() != 1 || tc.cols() != ta.cols() {
            return Err(shape_err(
                "add_bias_relu",
                format!("{:?} + {:?} + {:?}", ta.shape(), tb.shape(), tc.shape()),
            ));
        }
        let mut out = ta.clone();
        for r in 0..out.rows() {
            for ((x, &y), &c) in out.row_mut(r).iter_mut().zip(tb.row(r)).zip(tc.data()) {
                *x = (*x + y + c).max(T::zero());
            }
        }
        self.push(out, Op::AddBiasRelu(a, b, bias))
    }

    pub fn leaky_relu(&mut self, a: Var, slope: T) -> Result<Var> {
        let out = self
            .value(a)
            .map(|x| if x > T::zero() { x } else { slope * x });
        self.push(out, Op::LeakyRelu(a, slope))
    }

    pub fn sigmoid(&mut self, a: Var) -> Result<Var> {
        let out = self.value(a).map(sigmoid);
        self.push(out, Op::Sigmoid(a))
    }

    /// Scales row `r` of `a` by `s[r]`, where `s` is a column.
    pub fn mul_rows(&mut self, a: Var, s: Var) -> Result<Var> {
        let (ta, ts) = (self.value(a), self.value(s));
        if ts.cols() != 1 || ts.rows() != ta.rows() {
            return Err(shape_err(
                "mul_rows",
                format!("{:?} by {:?}", ta.shape(), ts.shape()),
            ));
        }
        let mut out = ta.clone();
        for r in 0..out.rows() {
            let k = ts.data()[r];
            for x in out.row_mut(r) {
                *x *= k;
            }
        }
        self.push(out, Op::MulRows(a, s))
    }

    /// `out[p] = a[index[p]]`.
    pub fn gather(&mut self, a: Var, index: Arc<[usize]>) -> Result<Var> {
        let ta = self.value(a);
        if let Some(&bad) = index.iter().find(|&&i| i >= ta.rows()) {
            return Err(TensorError::Index {
                op: "gather",
                index: bad,
                bound: ta.rows(),
            });
        }
        let cols = ta.cols();
        let mut data = Vec::with_capacity(index.len() * cols);
        for &i in index.iter() {
            data.extend_from_slice(ta.row(i));
        }
        let out = Tensor::from_vec(index.len(), cols, data)?;
        self.push(out, Op::Gather(a, index))
    }

    /// `out[index[p]] += a[p]` into a zero tensor with `rows` rows.
    pub fn scatter_add(&mut self, a: Var, index: Arc<[usize]>, rows: usize) -> Result<Var> {
        let ta = self.value(a);
        if index.len() != ta.rows() {
            return Err(shape_err(
                "scatter_add",
                format!("{} indices for {} rows", index.len(), ta.rows()),
            ));
        }
        if let Some(&bad) = index.iter().find(|&&i| i >= rows) {
            return Err(TensorError::Index {
                op: "scatter_add",
                index: bad,
                bound: rows,
            });
        }
        let mut out = Tensor::zeros(rows, ta.cols());
        scatter_rows(ta, &index, &mut out);
        self.push(out, Op::ScatterAdd(a, index))
    }

    /// `out[to[p]] += coef[p] * src[from[p]]` into a zero tensor with `rows`
    /// rows. Same as gather, mul_rows, scatter_add without the pair-sized
    /// intermediates.
    pub fn gather_scatter(
        &mut self,
        src: Var,
        coef: Var,
        from: Arc<[usize]>,
        to: Arc<[usize]>,
        rows: usize,
    ) -> Result<Var> {
        let (ts, tc) = (self.value(src), self.value(coef));
        if from.len() != to.len() || tc.cols() != 1 || tc.rows() != from.len() {
            return Err(shape_err(
                "gather_scatter",
                format!(
                    "{} sources, {} targets, coef {:?}",
                    from.len(),
                    to.len(),
                    tc.shape()
                ),
            ));
        }
        for (index, bound) in [(&from, ts.rows()), (&to, rows)] {
            if let Some(&bad) = index.iter().find(|&&i| i >= bound) {
                return Err(TensorError::Index {
                    op: "gather_scatter",
                    index: bad,
                    bound,
                });
            }
        }
        let mut out = Tensor::zeros(rows, ts.cols());
        for (p, (&i, &j)) in from.iter().zip(to.iter()).enumerate() {
            let k = tc.data()[p];
            for (x, &y) in out.row_mut(j).iter_mut().zip(ts.row(i)) {
                *x += k * y;
            }
        }
        self.push(out, Op::GatherScatter(src, coef, from, to))
    }

    /// Softmax of a score column within groups: element `p` belongs to segment
    /// `segment[p]`, and every segment in `0..num_segments` must be nonempty.
    pub fn segment_softmax(
        &mut self,
        scores: Var,
        segment: Arc<[usize]>,
        num_segments: usize,
    ) -> Result<Var> {
        let ts = self.value(scores);
        if ts.cols() != 1 || ts.rows() != segment.len() {
            return Err(shape_err(
                "segment_softmax",
                format!("scores {:?} with {} segment ids", ts.shape(), segment.len()),
            ));
        }
        let mut max = vec![T::neg_infinity(); num_segments];
        for (&s, &x) in segment.iter().zip(ts.data()) {
            if s >= num_segments {
                return Err(TensorError::Index {
                    op: "segment_softmax",
                    index: s,
                    bound: num_segments,
                });
            }
            max[s] = max[s].max(x);
        }
        if let Some(empty) = max.iter().position(|m| *m == T::neg_infinity()) {
            return Err(TensorError::EmptySegment(empty));
        }
        let mut sum = vec![T::zero(); num_segments];
        let mut out: Vec<T> = segment
            .iter()
            .zip(ts.data())
            .map(|(&s, &x)| {
                let e = (x - max[s]).exp();
                sum[s] += e;
                e
            })
            .collect();
        for (y, &s) in out.iter_mut().zip(segment.iter()) {
            *y = *y / sum[s];
        }
        self.push(
            Tensor::column(std::mem::take(&mut out)),
            Op::SegmentSoftmax(scores, segment),
        )
    }

    /// Horizontal concatenation `[a ‖ b]`.
    pub fn concat_cols(&mut self, a: Var, b: Var) -> Result<Var> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.rows() != tb.rows() {
            return Err(shape_err(
                "concat_cols",
                format!("{:?} | {:?}", ta.shape(), tb.shape()),
            ));
        }
        let mut data = Vec::with_capacity(ta.len() + tb.len());
        for r in 0..ta.rows() {
            data.extend_from_slice(ta.row(r));
            data.extend_from_slice(tb.row(r));
        }
        let out = Tensor::from_vec(ta.rows(), ta.cols() + tb.cols(), data)?;
        self.push(out, Op::ConcatCols(a, b))
    }

    /// Vertical concatenation `[a ; b]`.
    pub fn concat_rows(&mut self, a: Var, b: Var) -> Result<Var> {
        let (ta, tb) = (self.value(a), self.value(b));
        if ta.cols() != tb.cols() {
            return Err(shape_err(
                "concat_rows",
                format!("{:?} / {:?}", ta.shape(), tb.shape()),
            ));
        }
        let mut data = ta.data().to_vec();
        data.extend_from_slice(tb.data());
        let out = Tensor::from_vec(ta.rows() + tb.rows(), ta.cols(), data)?;
        self.push(out, Op::ConcatRows(a, b))
    }

    /// Mean binary cross-entropy between predictions in `(0, 1)` and 0/1
    /// targets, with predictions clamped to `[ε, 1 − ε]`.
    pub fn bce_loss(&mut self, pred: Var, target: Arc<[T]>) -> Result<Var> {
        let tp = self.value(pred);
        if tp.len() != target.len() {
            return Err(shape_err(
                "bce_loss",
                format!("{} predictions for {} targets", tp.len(), target.len()),
            ));
        }
        let value = bce(tp.data(), &target);
        self.push(Tensor::scalar(value), Op::Bce(pred, target))
    }

    /// Back-propagates from the scalar `output` and adds the resulting
    /// parameter gradients into `params`.
    pub fn backward(&self, output: Var, params: &mut ParamSet<T>) -> Result<()> {
        let grads = self.gradients(output)?;
        for (node, grad) in self.nodes.iter().zip(grads) {
            if let (Op::Param(id), Some(g)) = (&node.op, grad) {
                params.grad_mut(*id).add_assign(&g);
            }
        }
        Ok(())
    }

    /// Gradient of the scalar `output` with respect to every recorded node.
    /// Untracked nodes get `None`.
    pub fn gradients(&self, output: Var) -> Result<Vec<Option<Tensor<T>>>> {
        let out_shape = self.shape(output);
        if out_shape != (1, 1) {
            return Err(shape_err(
                "backward",
                format!("output must be 1x1, got {out_shape:?}"),
            ));
        }
        let mut grads: Vec<Option<Tensor<T>>> = (0..self.nodes.len()).map(|_| None).collect();
        grads[output.0] = Some(Tensor::scalar(T::one()));
        for idx in (0..=output.0).rev() {
            let Some(g) = grads[idx].take() else {
                continue;
            };
            let node = &self.nodes[idx];
            if !node.tracked {
                continue;
            }
            self.backprop_node(node, &g, &mut grads);
            if self.checked && !g.all_finite() {
                return Err(TensorError::NonFinite { op: node.op.name() });
            }
            grads[idx] = Some(g);
        }
        Ok(grads)
    }

    fn backprop_node(&self, node: &Node<T>, g: &Tensor<T>, grads: &mut [Option<Tensor<T>>]) {
        let mut send = |v: Var, contribution: Tensor<T>| {
            if !self.nodes[v.0].tracked {
                return;
            }
            match &mut grads[v.0] {
                Some(acc) => acc.add_assign(&contribution),
                slot @ None => *slot = Some(contribution),
            }
        };
        let tracked = |v: Var| self.nodes[v.0].tracked;
        match &node.op {
            Op::Constant | Op::Param(_) => {}
            Op::MatMul(a, b) => {
                let (ta, tb) = (self.value(*a), self.value(*b));
                if tracked(*a) {
                    let mut ga = Tensor::zeros(ta.rows(), ta.cols());
                    gemm_into(g, false, tb, true, T::zero(), &mut ga);
                    send(*a, ga);
                }
                if tracked(*b) {
                    let mut gb = Tensor::zeros(tb.rows(), tb.cols());
                    gemm_into(ta, true, g, false, T::zero(), &mut gb);
                    send(*b, gb);
                }
            }
            Op::Add(a, b) => {
                send(*a, g.clone());
                send(*b, g.clone());
            }
            Op::AddRow(a, bias) => {
                send(*a, g.clone());
                if tracked(*bias) {
                    let mut gb = Tensor::zeros(1, g.cols());
                    for r in 0..g.rows() {
                        for (acc, &x) in gb.data_mut().iter_mut().zip(g.row(r)) {
                            *acc += x;
                        }
                    }
                    send(*bias, gb);
                }
            }
            Op::Scale(a, k) => send(*a, g.map(|x| x * *k)),
            Op::Relu(a) => {
                let x = self.value(*a);
                send(
                    *a,
                    zip_map(g, x, |g, x| if x > T::zero() { g } else { T::zero() }),
                );
            }
            Op::AddBiasRelu(a, b, bias) => {
                let y = &node.value;
                let masked = zip_map(g, y, |g, y| if y > T::zero() { g } else { T::zero() });
                if tracked(*bias) {
                    let mut gb = Tensor::zeros(1, masked.cols());
                    for r in 0..masked.rows() {
                        for (acc, &x) in gb.data_mut().iter_mut().zip(masked.row(r)) {
                            *acc += x;
                        }
                    }
                    send(*bias, gb);
                }
                match (tracked(*a), tracked(*b)) {
                    (true, true) => {
                        send(*a, masked.clone());
                        send(*b, masked);
                    }
                    (true, false) => send(*a, masked),
                    (false, true) => send(*b, masked),
                    (false, false) => {}
                }
            }
            Op::LeakyRelu(a, slope) => {
                let x = self.value(*a);
                send(
                    *a,
                    zip_map(g, x, |g, x| if x > T::zero() { g } else { *slope * g }),
                );
            }
            Op::Sigmoid(a) => {
                let y = &node.value;
                send(*a, zip_map(g, y, |g, y| g * y * (T::one() - y)));
            }
            Op::MulRows(a, s) => {
                let (ta, ts) = (self.value(*a), self.value(*s));
                if tracked(*a) {
                    let mut ga = g.clone();
                    for r in 0..ga.rows() {
                        let k = ts.data()[r];
                        for x in ga.row_mut(r) {
                            *x *= k;
                        }
                    }
                    send(*a, ga);
                }
                if tracked(*s) {
                    let gs: Vec<T> = (0..ta.rows())
                        .map(|r| g.row(r).iter().zip(ta.row(r)).map(|(&x, &y)| x * y).sum())
                        .collect();
                    send(*s, Tensor::column(gs));
                }
            }
            Op::Gather(a, index) => {
                let ta = self.value(*a);
                let mut ga = Tensor::zeros(ta.rows(), ta.cols());
                scatter_rows(g, index, &mut ga);
                send(*a, ga);
            }
            Op::ScatterAdd(a, index) => {
                let cols = g.cols();
                let mut data = Vec::with_capacity(index.len() * cols);
                for &i in index.iter() {
                    data.extend_from_slice(g.row(i));
                }
                send(
                    *a,
                    Tensor::from_vec(index.len(), cols, data).expect("shape by construction"),
                );
            }
            Op::GatherScatter(src, coef, from, to) => {
                let (ts, tc) = (self.value(*src), self.value(*coef));
                if tracked(*src) {
                    let mut gs = Tensor::zeros(ts.rows(), ts.cols());
                    for (p, (&i, &j)) in from.iter().zip(to.iter()).enumerate() {
                        let k = tc.data()[p];
                        for (x, &y) in gs.row_mut(i).iter_mut().zip(g.row(j)) {
                            *x += k * y;
                        }
                    }
                    send(*src, gs);
                }
                if tracked(*coef) {
                    let gc: Vec<T> = from
                        .iter()
                        .zip(to.iter())
                        .map(|(&i, &j)| ts.row(i).iter().zip(g.row(j)).map(|(&x, &y)| x * y).sum())
                        .collect();
                    send(*coef, Tensor::column(gc));
                }
            }
            Op::SegmentSoftmax(a, segment) => {
                let y = node.value.data();
                let num_segments = segment.iter().max().map_or(0, |m| m + 1);
                let mut inner = vec![T::zero(); num_segments];
                for ((&s, &gy), &yy) in segment.iter().zip(g.data()).zip(y) {
                    inner[s] += gy * yy;
                }
                let gx = segment
                    .iter()
                    .zip(g.data())
                    .zip(y)
                    .map(|((&s, &gy), &yy)| yy * (gy - inner[s]))
                    .collect();
                send(*a, Tensor::column(gx));
            }
            Op::ConcatCols(a, b) => {
                let ca = self.value(*a).cols();
                let cb = self.value(*b).cols();
                let mut ga = Vec::with_capacity(g.rows() * ca);
                let mut gb = Vec::with_capacity(g.rows() * cb);
                for r in 0..g.rows() {
                    ga.extend_from_slice(&g.row(r)[..ca]);
                    gb.extend_from_slice(&g.row(r)[ca..]);
                }
                send(*a, Tensor::from_vec(g.rows(), ca, ga).expect("shape"));
                send(*b, Tensor::from_vec(g.rows(), cb, gb).expect("shape"));
            }
            Op::ConcatRows(a, b) => {
                let ra = self.value(*a).rows();
                let split = ra * g.cols();
                send(
                    *a,
                    Tensor::from_vec(ra, g.cols(), g.data()[..split].to_vec()).expect("shape"),
                );
                send(
                    *b,
                    Tensor::from_vec(g.rows() - ra, g.cols(), g.data()[split..].to_vec())
                        .expect("shape"),
                );
            }
            Op::Bce(pred, target) => {
                let tp = self.value(*pred);
                let scale = g.data()[0] / T::of(tp.len() as f64);
                let eps = T::of(BCE_EPS);
                let data = tp
                    .data()
                    .iter()
                    .zip(target.iter())
                    .map(|(&p, &t)| {
                        if p < eps || p > T::one() - eps {
                            T::zero()
                        } else {
                            scale * (p - t) / (p * (T::one() - p))
                        }
                    })
                    .collect();
                send(
                    *pred,
                    Tensor::from_vec(tp.rows(), tp.cols(), data).expect("shape"),
                );
            }
        }
    }
}

pub fn sigmoid<T: Real>(x: T) -> T {
    if x >= T::zero() {
        T::one() / (T::one() + (-x).exp())
    } else {
        let e = x.exp();
        e / (T::one() + e)
    }
}

/// Mean clamped binary cross-entropy.
pub fn bce<T: Real>(pred: &[T], target: &[T]) -> T {
    let eps = T::of(BCE_EPS);
    let total: T = pred
        .iter()
        .zip(target)
        .map(|(&p, &t)| {
            let p = p.max(eps).min(T::one() - eps);
            -(t * p.ln() + (T::one() - t) * (T::one() - p).ln())
        })
        .sum();
    total / T::of(pred.len() as f64)
}

fn zip_map<T: Real>(a: &Tensor<T>, b: &Tensor<T>, f: impl Fn(T, T) -> T) -> Tensor<T> {
    let data = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| f(x, y))
        .collect();
    Tensor::from_vec(a.rows(), a.cols(), data).expect("same shape")
}

fn scatter_rows<T: Real>(src: &Tensor<T>, index: &[usize], out: &mut Tensor<T>) {
    for (p, &i) in index.iter().enumerate() {
        let row = src.row(p);
        for (x, &y) in out.row_mut(i).iter_mut().zip(row) {
            *x += y;
        }
    }
}
