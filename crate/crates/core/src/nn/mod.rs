//! Minimal differentiable building blocks: fully-connected networks with
//! hand-written backprop, Adam, and diagonal Gaussian policy math.

mod adam;
pub mod checkpoint;
mod gaussian;
mod mlp;
mod policy;

pub use adam::Adam;
pub use gaussian::{DiagonalGaussian, LOG_STD_MAX, LOG_STD_MIN};
pub use mlp::{ActivationCache, Mlp, OutputInit};
pub use policy::GaussianPolicy;

/// Euclidean norm of a flat vector.
pub fn l2_norm(values: &[f64]) -> f64 {
    values.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Rescales `grads` in place so that its global norm is at most `max_norm`.
/// Returns the norm before clipping.
pub fn clip_grad_norm(grads: &mut [f64], max_norm: f64) -> f64 {
    let norm = l2_norm(grads);
    if norm > max_norm && norm > 0.0 {
        let scale = max_norm / norm;
        grads.iter_mut().for_each(|g| *g *= scale);
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_leaves_small_gradients_alone() {
        let mut g = vec![0.1, -0.2];
        let before = g.clone();
        clip_grad_norm(&mut g, 1.0);
        assert_eq!(g, before);
    }

    #[test]
    fn clip_bounds_global_norm() {
        let mut g = vec![3.0, 4.0];
        let pre = clip_grad_norm(&mut g, 0.5);
        assert_eq!(pre, 5.0);
        assert!(l2_norm(&g) <= 0.5 + 1e-12);
        assert!((g[0] / g[1] - 0.75).abs() < 1e-12);
    }
}
