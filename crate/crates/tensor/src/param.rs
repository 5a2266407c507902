use rand::Rng;

use crate::error::{Result, TensorError};
use crate::tensor::{Real, Tensor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParamId(pub(crate) usize);

impl ParamId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A trainable tensor with its gradient and Adam moments.
#[derive(Clone, Debug)]
pub struct Param<T> {
    pub name: String,
    pub value: Tensor<T>,
    pub grad: Tensor<T>,
    first_moment: Tensor<T>,
    second_moment: Tensor<T>,
    step: u64,
}

impl<T: Real> Param<T> {
    pub fn new(name: impl Into<String>, value: Tensor<T>) -> Self {
        let (r, c) = value.shape();
        Self {
            name: name.into(),
            grad: Tensor::zeros(r, c),
            first_moment: Tensor::zeros(r, c),
            second_moment: Tensor::zeros(r, c),
            value,
            step: 0,
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

/// Ordered, named collection of parameters.
#[derive(Clone, Debug, Default)]
pub struct ParamSet<T> {
    params: Vec<Param<T>>,
}

impl<T: Real> ParamSet<T> {
    pub fn new() -> Self {
        Self { params: Vec::new() }
    }

    pub fn add(&mut self, name: impl Into<String>, value: Tensor<T>) -> ParamId {
        self.params.push(Param::new(name, value));
        ParamId(self.params.len() - 1)
    }

    /// Glorot-initialized weight matrix.
    pub fn add_weight<R: Rng + ?Sized>(
        &mut self,
        name: impl Into<String>,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> ParamId {
        self.add(name, Tensor::glorot(rows, cols, rng))
    }

    /// Zero-initialized `1 × cols` bias.
    pub fn add_bias(&mut self, name: impl Into<String>, cols: usize) -> ParamId {
        self.add(name, Tensor::zeros(1, cols))
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ParamId> {
        (0..self.params.len()).map(ParamId)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Param<T>> {
        self.params.iter()
    }

    pub fn get(&self, id: ParamId) -> &Param<T> {
        &self.params[id.0]
    }

    pub fn get_mut(&mut self, id: ParamId) -> &mut Param<T> {
        &mut self.params[id.0]
    }

    pub fn value(&self, id: ParamId) -> &Tensor<T> {
        &self.params[id.0].value
    }

    pub fn grad(&self, id: ParamId) -> &Tensor<T> {
        &self.params[id.0].grad
    }

    pub fn grad_mut(&mut self, id: ParamId) -> &mut Tensor<T> {
        &mut self.params[id.0].grad
    }

    pub fn find(&self, name: &str) -> Option<ParamId> {
        self.params.iter().position(|p| p.name == name).map(ParamId)
    }

    /// Replaces a parameter value, keeping its shape.
    pub fn set_value(&mut self, id: ParamId, value: Tensor<T>) -> Result<()> {
        let p = &mut self.params[id.0];
        if p.value.shape() != value.shape() {
            return Err(TensorError::Shape {
                op: "set_value",
                detail: format!("{}: {:?} vs {:?}", p.name, p.value.shape(), value.shape()),
            });
        }
        p.value = value;
        Ok(())
    }

    pub fn zero_grad(&mut self) {
        for p in &mut self.params {
            p.grad.data_mut().iter_mut().for_each(|g| *g = T::zero());
        }
    }

    pub fn num_scalars(&self) -> usize {
        self.params.iter().map(|p| p.value.len()).sum()
    }

    /// Same parameters with a different element type. Adam state is reset.
    pub fn cast<U: Real>(&self) -> ParamSet<U> {
        ParamSet {
            params: self
                .params
                .iter()
                .map(|p| Param::new(p.name.clone(), p.value.cast()))
                .collect(),
        }
    }
}

/// Adam with decoupled weight decay.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Adam {
    pub lr: f64,
    pub weight_decay: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for Adam {
    fn default() -> Self {
        Self {
            lr: 5e-5,
            weight_decay: 5e-4,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

impl Adam {
    pub fn with_lr(lr: f64) -> Self {
        Self {
            lr,
            ..Self::default()
        }
    }

    /// One update of every parameter from its current gradient. Gradients are
    /// left in place; call [`ParamSet::zero_grad`] before the next accumulation.
    pub fn step<T: Real>(&self, params: &mut ParamSet<T>) {
        for p in &mut params.params {
            p.step += 1;
            let t = p.step as i32;
            let c1 = 1.0 - self.beta1.powi(t);
            let c2 = 1.0 - self.beta2.powi(t);
            let decay = 1.0 - self.lr * self.weight_decay;
            let (b1, b2) = (T::of(self.beta1), T::of(self.beta2));
            let values = p.value.data_mut();
            let grads = p.grad.data();
            let m = p.first_moment.data_mut();
            let v = p.second_moment.data_mut();
            for k in 0..values.len() {
                let g = grads[k];
                m[k] = b1 * m[k] + (T::one() - b1) * g;
                v[k] = b2 * v[k] + (T::one() - b2) * g * g;
                let m_hat = m[k].as_f64() / c1;
                let v_hat = v[k].as_f64() / c2;
                let w = values[k].as_f64() * decay - self.lr * m_hat / (v_hat.sqrt() + self.eps);
                values[k] = T::of(w);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn zero_gradient_without_decay_is_a_no_op() {
        let mut ps = ParamSet::<f64>::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let id = ps.add_weight("w", 3, 4, &mut rng);
        let before = ps.value(id).clone();
        let adam = Adam {
            weight_decay: 0.0,
            ..Adam::default()
        };
        for _ in 0..5 {
            adam.step(&mut ps);
        }
        assert_eq!(ps.value(id), &before);
        assert_eq!(ps.get(id).step_count(), 5);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        let mut ps = ParamSet::<f64>::new();
        let id = ps.add("w", Tensor::scalar(0.3));
        ps.grad_mut(id).data_mut()[0] = 1.0;
        let adam = Adam {
            weight_decay: 0.0,
            ..Adam::default()
        };
        adam.step(&mut ps);
        let delta = ps.value(id).data()[0] - 0.3;
        assert!(
            (delta + adam.lr).abs() < 1e-9 * adam.lr.max(1.0) + 1e-12,
            "{delta}"
        );
    }

    #[test]
    fn quadratic_decreases() {
        let mut ps = ParamSet::<f64>::new();
        let id = ps.add("w", Tensor::scalar(1.0));
        let adam = Adam::with_lr(1e-2);
        let mut prev = f64::INFINITY;
        for _ in 0..100 {
            let w = ps.value(id).data()[0];
            let f = w * w;
            assert!(f < prev);
            prev = f;
            ps.zero_grad();
            ps.grad_mut(id).data_mut()[0] = 2.0 * w;
            adam.step(&mut ps);
        }
        assert!(prev < 0.5);
    }

    #[test]
    fn glorot_bounds_and_bias_zero() {
        let mut ps = ParamSet::<f32>::new();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let w = ps.add_weight("w", 10, 6, &mut rng);
        let b = ps.add_bias("b", 6);
        let a = (6.0f32 / 16.0).sqrt();
        assert!(ps.value(w).data().iter().all(|x| x.abs() <= a));
        assert!(ps.value(b).data().iter().all(|&x| x == 0.0));
        assert_eq!(ps.find("b"), Some(b));
        assert_eq!(ps.num_scalars(), 66);
    }
}
