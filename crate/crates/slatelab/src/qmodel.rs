//! Scalar feedforward regressor for item long-term values, with a frozen
//! label-network copy for bootstrapped TD targets, plus feature construction.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::user::UserState;
use crate::{Result, SlateError};

/// Feature vector for a (user, document) pair:
/// `[interests (T)] ++ [topic one-hot (T)] ++ [quality (1)]`.
/// The budget is unobservable and deliberately absent.
pub fn featurize(user: &UserState, doc: &Document) -> Vec<f64> {
    let t = user.interests.len();
    let mut x = Vec::with_capacity(2 * t + 1);
    x.extend_from_slice(&user.interests);
    let mut one_hot = vec![0.0; t];
    one_hot[doc.topic] = 1.0;
    x.extend_from_slice(&one_hot);
    x.push(doc.quality);
    x
}

/// Document-only feature block `[topic one-hot (T)] ++ [quality (1)]`, the
/// building block for whole-slate features.
pub fn doc_block(num_topics: usize, doc: &Document) -> Vec<f64> {
    let mut x = vec![0.0; num_topics + 1];
    x[doc.topic] = 1.0;
    x[num_topics] = doc.quality;
    x
}

/// Whole-slate feature vector for the atomic-slate baseline:
/// `[interests (T)] ++ k * ([topic one-hot (T)] ++ [quality (1)])`.
pub fn featurize_slate(user: &UserState, slate: &[&Document]) -> Vec<f64> {
    let t = user.interests.len();
    let mut x = Vec::with_capacity(t + slate.len() * (t + 1));
    x.extend_from_slice(&user.interests);
    for doc in slate {
        x.extend(doc_block(t, doc));
    }
    x
}

/// Multilayer perceptron with rectifier hidden layers and a single linear
/// output. Weights are stored row-major, one matrix per layer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QNetwork {
    /// Layer widths from input to output; the last entry is always 1.
    pub dims: Vec<usize>,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

/// Frozen deep copy of a [`QNetwork`] used to compute bootstrap targets.
#[derive(Debug, Clone)]
pub struct LabelNetwork(QNetwork);

impl LabelNetwork {
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.0.predict(x)
    }
}

impl QNetwork {
    /// Glorot-uniform initialization over the given hidden widths.
    pub fn new<R: Rng>(input_dim: usize, hidden: &[usize], rng: &mut R) -> Self {
        let mut dims = vec![input_dim];
        dims.extend_from_slice(hidden);
        dims.push(1);
        let mut weights = Vec::with_capacity(dims.len() - 1);
        let mut biases = Vec::with_capacity(dims.len() - 1);
        for l in 0..dims.len() - 1 {
            let (fan_in, fan_out) = (dims[l], dims[l + 1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            weights.push((0..fan_in * fan_out).map(|_| rng.gen_range(-limit..=limit)).collect());
            // Random biases keep rectifier pre-activations off the exact kink,
            // where subgradients and finite differences disagree.
            biases.push((0..fan_out).map(|_| rng.gen_range(-limit..=limit)).collect());
        }
        Self { dims, weights, biases }
    }

    /// All-zero network; predicts 0 everywhere.
    pub fn zeros(input_dim: usize, hidden: &[usize]) -> Self {
        let mut dims = vec![input_dim];
        dims.extend_from_slice(hidden);
        dims.push(1);
        let weights = (0..dims.len() - 1).map(|l| vec![0.0; dims[l] * dims[l + 1]]).collect();
        let biases = (0..dims.len() - 1).map(|l| vec![0.0; dims[l + 1]]).collect();
        Self { dims, weights, biases }
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dims[0] {
            return Err(SlateError::DimensionMismatch { expected: self.dims[0], got: x.len() });
        }
        Ok(())
    }

    /// Forward pass returning all post-activation layer outputs.
    fn forward(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let layers = self.dims.len() - 1;
        let mut activations: Vec<Vec<f64>> = Vec::with_capacity(layers + 1);
        activations.push(x.to_vec());
        for l in 0..layers {
            let (n_in, n_out) = (self.dims[l], self.dims[l + 1]);
            let input = &activations[l];
            let mut out = vec![0.0; n_out];
            for j in 0..n_out {
                let row = &self.weights[l][j * n_in..(j + 1) * n_in];
                let mut z = self.biases[l][j];
                for (w, a) in row.iter().zip(input.iter()) {
                    z += w * a;
                }
                out[j] = if l + 1 == layers { z } else { z.max(0.0) };
            }
            activations.push(out);
        }
        activations
    }

    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        self.check_input(x)?;
        Ok(self.forward(x).last().expect("output layer")[0])
    }

    /// Gradient of the squared-error loss `0.5 * (predict(x) - target)^2`
    /// with respect to all parameters. Returns (loss, gradient).
    pub fn loss_and_grad(&self, x: &[f64], target: f64) -> Result<(f64, Gradients)> {
        self.check_input(x)?;
        if !target.is_finite() {
            return Err(SlateError::NonFiniteTarget(target));
        }
        let activations = self.forward(x);
        let layers = self.dims.len() - 1;
        let pred = activations[layers][0];
        let loss = 0.5 * (pred - target) * (pred - target);

        let mut grad_w: Vec<Vec<f64>> = self.weights.iter().map(|w| vec![0.0; w.len()]).collect();
        let mut grad_b: Vec<Vec<f64>> = self.biases.iter().map(|b| vec![0.0; b.len()]).collect();

        // Output layer is linear; hidden layers gate the backward signal on
        // their rectifier activation.
        let mut delta = vec![pred - target];
        for l in (0..layers).rev() {
            let (n_in, n_out) = (self.dims[l], self.dims[l + 1]);
            let input = &activations[l];
            for j in 0..n_out {
                let d = delta[j];
                grad_b[l][j] = d;
                let row = &mut grad_w[l][j * n_in..(j + 1) * n_in];
                for (g, a) in row.iter_mut().zip(input.iter()) {
                    *g = d * a;
                }
            }
            if l > 0 {
                let mut prev = vec![0.0; n_in];
                for j in 0..n_out {
                    let d = delta[j];
                    let row = &self.weights[l][j * n_in..(j + 1) * n_in];
                    for (p, w) in prev.iter_mut().zip(row.iter()) {
                        *p += d * w;
                    }
                }
                // Rectifier gate of layer l's own activation.
                for (p, a) in prev.iter_mut().zip(activations[l].iter()) {
                    if *a <= 0.0 {
                        *p = 0.0;
                    }
                }
                delta = prev;
            }
        }
        Ok((loss, Gradients { weights: grad_w, biases: grad_b }))
    }

    /// Applies `params -= lr * grad`.
    pub fn apply_gradients(&mut self, grad: &Gradients, lr: f64) {
        for (w, g) in self.weights.iter_mut().zip(&grad.weights) {
            for (wi, gi) in w.iter_mut().zip(g) {
                *wi -= lr * gi;
            }
        }
        for (b, g) in self.biases.iter_mut().zip(&grad.biases) {
            for (bi, gi) in b.iter_mut().zip(g) {
                *bi -= lr * gi;
            }
        }
    }

    /// One SGD step on a single sample; returns the pre-step loss.
    pub fn sgd_step(&mut self, x: &[f64], target: f64, lr: f64) -> Result<f64> {
        let (loss, grad) = self.loss_and_grad(x, target)?;
        self.apply_gradients(&grad, lr);
        Ok(loss)
    }

    /// One SGD step on the mean loss of a batch; returns the mean pre-step loss.
    pub fn train_batch(&mut self, batch: &[(Vec<f64>, f64)], lr: f64) -> Result<f64> {
        self.train_batch_clipped(batch, lr, f64::INFINITY)
    }

    /// Like `train_batch`, but rescales the mean gradient when its global L2
    /// norm exceeds `max_grad_norm`. Bootstrapped maximization targets can
    /// otherwise push the weights into runaway growth.
    pub fn train_batch_clipped(
        &mut self,
        batch: &[(Vec<f64>, f64)],
        lr: f64,
        max_grad_norm: f64,
    ) -> Result<f64> {
        if batch.is_empty() {
            return Ok(0.0);
        }
        let mut total_loss = 0.0;
        let mut acc: Option<Gradients> = None;
        for (x, target) in batch {
            let (loss, grad) = self.loss_and_grad(x, *target)?;
            total_loss += loss;
            match &mut acc {
                None => acc = Some(grad),
                Some(a) => a.add(&grad),
            }
        }
        let mut acc = acc.expect("nonempty batch");
        acc.scale(1.0 / batch.len() as f64);
        let norm = acc.l2_norm();
        if norm > max_grad_norm {
            acc.scale(max_grad_norm / norm);
        }
        self.apply_gradients(&acc, lr);
        Ok(total_loss / batch.len() as f64)
    }

    /// Deep copy for bootstrapped targets; later main-net updates do not
    /// affect the copy.
    pub fn sync_label_network(&self) -> LabelNetwork {
        LabelNetwork(self.clone())
    }

    /// Flat parameter view used by finite-difference checks.
    pub fn param_count(&self) -> usize {
        self.weights.iter().map(Vec::len).sum::<usize>()
            + self.biases.iter().map(Vec::len).sum::<usize>()
    }

    pub fn get_param(&self, idx: usize) -> f64 {
        *self.param_slot(idx)
    }

    pub fn nudge_param(&mut self, idx: usize, delta: f64) {
        let mut i = idx;
        for w in &mut self.weights {
            if i < w.len() {
                w[i] += delta;
                return;
            }
            i -= w.len();
        }
        for b in &mut self.biases {
            if i < b.len() {
                b[i] += delta;
                return;
            }
            i -= b.len();
        }
        panic!("parameter index out of range");
    }

    fn param_slot(&self, idx: usize) -> &f64 {
        let mut i = idx;
        for w in &self.weights {
            if i < w.len() {
                return &w[i];
            }
            i -= w.len();
        }
        for b in &self.biases {
            if i < b.len() {
                return &b[i];
            }
            i -= b.len();
        }
        panic!("parameter index out of range");
    }

    /// Flat gradient in the same order as the flat parameter view.
    pub fn flat_grad(grad: &Gradients) -> Vec<f64> {
        let mut flat = Vec::new();
        for w in &grad.weights {
            flat.extend_from_slice(w);
        }
        for b in &grad.biases {
            flat.extend_from_slice(b);
        }
        flat
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| SlateError::Config(format!("bad checkpoint: {e}")))
    }
}

/// Per-parameter gradients with the same shape as the network.
#[derive(Debug, Clone)]
pub struct Gradients {
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
}

impl Gradients {
    fn add(&mut self, other: &Gradients) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (a, b) in self.biases.iter_mut().zip(&other.biases) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    fn l2_norm(&self) -> f64 {
        let sq = |vs: &[Vec<f64>]| {
            vs.iter().flat_map(|v| v.iter()).map(|x| x * x).sum::<f64>()
        };
        (sq(&self.weights) + sq(&self.biases)).sqrt()
    }

    fn scale(&mut self, c: f64) {
        for w in &mut self.weights {
            for x in w {
                *x *= c;
            }
        }
        for b in &mut self.biases {
            for x in b {
                *x *= c;
            }
        }
    }
}
