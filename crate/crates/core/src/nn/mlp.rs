//! Fully-connected network: tanh on hidden layers, identity on the output.
//!
//! All parameters live in one flat vector so the optimizer, checkpoints and
//! gradient checks can treat a network as a plain `&[f64]`. Layer `l` stores
//! its weight matrix row-major with shape `(n_out, n_in)`, followed by its
//! `n_out` biases.

use ndarray::linalg::general_mat_mul;
use ndarray::{Array1, Array2, ArrayView2, ArrayViewMut1, ArrayViewMut2, Axis};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

/// Gain used for the orthogonal init of the output layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutputInit {
    /// Small gain (0.01) for policy mean heads.
    Policy,
    /// Unit gain for value and discriminator heads.
    Unit,
    /// Custom gain.
    Gain(f64),
}

impl OutputInit {
    fn gain(self) -> f64 {
        match self {
            OutputInit::Policy => 0.01,
            OutputInit::Unit => 1.0,
            OutputInit::Gain(g) => g,
        }
    }
}

const HIDDEN_GAIN: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    params: Vec<f64>,
}

/// Layer inputs recorded by a forward pass; enough to run backward.
#[derive(Debug, Clone)]
pub struct ActivationCache {
    /// `inputs[l]` is the `(batch, n_in)` input to layer `l`.
    inputs: Vec<Array2<f64>>,
}

impl ActivationCache {
    pub fn batch_size(&self) -> usize {
        self.inputs.first().map_or(0, |a| a.nrows())
    }
}

impl Mlp {
    /// Network with all parameters zero.
    pub fn zeros(sizes: &[usize]) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::config("layer_sizes", "need at least input and output sizes"));
        }
        if sizes.contains(&0) {
            return Err(Error::config("layer_sizes", "layer sizes must be positive"));
        }
        let mut offsets = Vec::with_capacity(sizes.len() - 1);
        let mut total = 0;
        for pair in sizes.windows(2) {
            offsets.push(total);
            total += (pair[0] + 1) * pair[1];
        }
        Ok(Self {
            sizes: sizes.to_vec(),
            offsets,
            params: vec![0.0; total],
        })
    }

    /// Orthogonal init: gain sqrt(2) on hidden layers, `output` gain on the
    /// last layer, zero biases.
    pub fn new<R: Rng + ?Sized>(sizes: &[usize], output: OutputInit, rng: &mut R) -> Result<Self> {
        let mut net = Self::zeros(sizes)?;
        let n_layers = net.num_layers();
        for l in 0..n_layers {
            let gain = if l + 1 == n_layers { output.gain() } else { HIDDEN_GAIN };
            let (n_in, n_out) = (sizes[l], sizes[l + 1]);
            let w = orthogonal(n_out, n_in, gain, rng);
            let off = net.offsets[l];
            net.params[off..off + n_out * n_in].copy_from_slice(&w);
        }
        Ok(net)
    }

    pub fn from_params(sizes: &[usize], params: Vec<f64>) -> Result<Self> {
        let mut net = Self::zeros(sizes)?;
        if params.len() != net.params.len() {
            return Err(Error::InputShape {
                expected: net.params.len(),
                actual: params.len(),
            });
        }
        net.params = params;
        Ok(net)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().expect("at least two sizes")
    }

    pub fn num_layers(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn weights(&self, l: usize) -> ArrayView2<'_, f64> {
        let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
        let off = self.offsets[l];
        ArrayView2::from_shape((n_out, n_in), &self.params[off..off + n_in * n_out])
            .expect("layer slice matches shape")
    }

    fn biases(&self, l: usize) -> &[f64] {
        let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
        let off = self.offsets[l] + n_in * n_out;
        &self.params[off..off + n_out]
    }

    /// Single-sample forward pass.
    pub fn forward(&self, input: &[f64]) -> Result<(Vec<f64>, ActivationCache)> {
        let x = ArrayView2::from_shape((1, input.len()), input).expect("row vector");
        let (out, cache) = self.forward_batch(x)?;
        Ok((out.into_raw_vec_and_offset().0, cache))
    }

    /// Forward pass without keeping the activation record.
    pub fn predict(&self, input: &[f64]) -> Result<Vec<f64>> {
        if input.len() != self.input_dim() {
            return Err(Error::InputShape {
                expected: self.input_dim(),
                actual: input.len(),
            });
        }
        let mut current = input.to_vec();
        let n_layers = self.num_layers();
        for l in 0..n_layers {
            let w = self.weights(l);
            let b = self.biases(l);
            let mut next: Vec<f64> = b.to_vec();
            for (o, row) in w.outer_iter().enumerate() {
                let row = row.as_slice().expect("contiguous row");
                next[o] += row.iter().zip(&current).map(|(a, x)| a * x).sum::<f64>();
            }
            if l + 1 < n_layers {
                next.iter_mut().for_each(|v| *v = v.tanh());
            }
            current = next;
        }
        Ok(current)
    }

    /// Batched forward pass over rows of `input`.
    pub fn forward_batch(&self, input: ArrayView2<'_, f64>) -> Result<(Array2<f64>, ActivationCache)> {
        if input.ncols() != self.input_dim() {
            return Err(Error::InputShape {
                expected: self.input_dim(),
                actual: input.ncols(),
            });
        }
        let n_layers = self.num_layers();
        let mut inputs = Vec::with_capacity(n_layers);
        let mut current = input.to_owned();
        for l in 0..n_layers {
            let w = self.weights(l);
            let b = ndarray::ArrayView1::from(self.biases(l));
            let mut z = Array2::from_shape_fn((current.nrows(), w.nrows()), |(_, j)| b[j]);
            general_mat_mul(1.0, &current, &w.t(), 1.0, &mut z);
            if l + 1 < n_layers {
                z.mapv_inplace(f64::tanh);
            }
            inputs.push(current);
            current = z;
        }
        Ok((current, ActivationCache { inputs }))
    }

    /// Gradient of `sum(output_grad * output)` with respect to the flat parameters.
    pub fn backward(&self, cache: &ActivationCache, output_grad: &[f64]) -> Result<Vec<f64>> {
        let rows = cache.batch_size();
        let cols = self.output_dim();
        if output_grad.len() != rows * cols {
            return Err(Error::InvalidCache(format!(
                "output gradient has {} entries, cache expects {rows}x{cols}",
                output_grad.len()
            )));
        }
        let g = ArrayView2::from_shape((rows, cols), output_grad).expect("checked shape");
        let mut grad = vec![0.0; self.param_count()];
        self.backward_into(cache, g, &mut grad)?;
        Ok(grad)
    }

    /// Accumulates (adds) the parameter gradient into `grad`.
    pub fn backward_into(
        &self,
        cache: &ActivationCache,
        output_grad: ArrayView2<'_, f64>,
        grad: &mut [f64],
    ) -> Result<()> {
        self.check_cache(cache)?;
        if output_grad.dim() != (cache.batch_size(), self.output_dim()) {
            return Err(Error::InvalidCache(format!(
                "output gradient shape {:?} does not match ({}, {})",
                output_grad.dim(),
                cache.batch_size(),
                self.output_dim()
            )));
        }
        if grad.len() != self.param_count() {
            return Err(Error::InputShape {
                expected: self.param_count(),
                actual: grad.len(),
            });
        }
        let mut delta = output_grad.to_owned();
        for l in (0..self.num_layers()).rev() {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let a_in = &cache.inputs[l];
            let off = self.offsets[l];
            let (gw, gb) = grad[off..off + (n_in + 1) * n_out].split_at_mut(n_in * n_out);
            let mut gw = ArrayViewMut2::from_shape((n_out, n_in), gw).expect("layer slice");
            general_mat_mul(1.0, &delta.t(), a_in, 1.0, &mut gw);
            let mut gb = ArrayViewMut1::from(gb);
            gb += &delta.sum_axis(Axis(0));
            if l > 0 {
                let mut prev = delta.dot(&self.weights(l));
                // a_in is tanh output of the previous layer
                prev.zip_mut_with(a_in, |d, &a| *d *= 1.0 - a * a);
                delta = prev;
            }
        }
        Ok(())
    }

    fn check_cache(&self, cache: &ActivationCache) -> Result<()> {
        if cache.inputs.len() != self.num_layers() {
            return Err(Error::InvalidCache(format!(
                "cache has {} layers, network has {}",
                cache.inputs.len(),
                self.num_layers()
            )));
        }
        for (l, a) in cache.inputs.iter().enumerate() {
            if a.ncols() != self.sizes[l] {
                return Err(Error::InvalidCache(format!(
                    "layer {l} input width {} != {}",
                    a.ncols(),
                    self.sizes[l]
                )));
            }
        }
        Ok(())
    }
}

/// `rows x cols` matrix (row-major) with orthonormal rows or columns, scaled by `gain`.
fn orthogonal<R: Rng + ?Sized>(rows: usize, cols: usize, gain: f64, rng: &mut R) -> Vec<f64> {
    // Orthonormalize the shorter side's vectors, each of the longer length.
    let (count, len) = if rows <= cols { (rows, cols) } else { (cols, rows) };
    let mut vecs: Vec<Array1<f64>> = Vec::with_capacity(count);
    while vecs.len() < count {
        let mut v: Array1<f64> = (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        for _ in 0..2 {
            for u in &vecs {
                let proj = u.dot(&v);
                v.scaled_add(-proj, u);
            }
        }
        let norm = v.dot(&v).sqrt();
        if norm > 1e-8 {
            vecs.push(v / norm);
        }
    }
    let mut out = vec![0.0; rows * cols];
    for (k, v) in vecs.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            let (r, c) = if rows <= cols { (k, i) } else { (i, k) };
            out[r * cols + c] = gain * x;
        }
    }
    out
}
