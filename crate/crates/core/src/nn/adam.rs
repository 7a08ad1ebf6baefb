use crate::{Error, Result};

/// Adam with bias correction. Moments start at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: u64,
    m: Vec<f64>,
    v: Vec<f64>,
}

impl Adam {
    pub fn new(num_params: usize, lr: f64) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-5,
            step: 0,
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
        }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn first_moment(&self) -> &[f64] {
        &self.m
    }

    pub fn second_moment(&self) -> &[f64] {
        &self.v
    }

    /// Applies one descent step to `params`. A non-finite gradient aborts the
    /// update and leaves both `params` and the optimizer state untouched.
    pub fn step(&mut self, params: &mut [f64], grads: &[f64]) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(Error::InputShape {
                expected: self.m.len(),
                actual: if params.len() != self.m.len() { params.len() } else { grads.len() },
            });
        }
        if grads.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite("adam gradient"));
        }
        self.step += 1;
        let t = self.step as i32;
        let bc1 = 1.0 - self.beta1.powi(t);
        let bc2 = 1.0 - self.beta2.powi(t);
        for ((p, &g), (m, v)) in params
            .iter_mut()
            .zip(grads)
            .zip(self.m.iter_mut().zip(self.v.iter_mut()))
        {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *p -= self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_leaves_params_and_counts_step() {
        let mut opt = Adam::new(3, 1e-3);
        let mut p = vec![1.0, -2.0, 0.5];
        opt.step(&mut p, &[0.0; 3]).unwrap();
        assert_eq!(p, vec![1.0, -2.0, 0.5]);
        assert_eq!(opt.step_count(), 1);
    }

    #[test]
    fn first_step_moves_by_lr_against_gradient_sign() {
        let lr = 1e-3;
        let mut opt = Adam::new(3, lr);
        let mut p = vec![0.0; 3];
        opt.step(&mut p, &[2.0, -0.5, 10.0]).unwrap();
        assert!((p[0] + lr).abs() < lr * 1e-4);
        assert!((p[1] - lr).abs() < lr * 1e-4);
        assert!((p[2] + lr).abs() < lr * 1e-4);
    }

    #[test]
    fn scalar_three_steps_match_reference() {
        let (lr, b1, b2, eps) = (0.01, 0.9, 0.999, 1e-5);
        let grads = [0.5, -1.5, 2.0];
        // hand-rolled reference
        let (mut x, mut m, mut v) = (1.0f64, 0.0f64, 0.0f64);
        for (k, g) in grads.iter().enumerate() {
            let t = (k + 1) as i32;
            m = b1 * m + (1.0 - b1) * g;
            v = b2 * v + (1.0 - b2) * g * g;
            let mh = m / (1.0 - f64::powi(b1, t));
            let vh = v / (1.0 - f64::powi(b2, t));
            x -= lr * mh / (vh.sqrt() + eps);
        }
        let mut opt = Adam::new(1, lr);
        let mut p = vec![1.0];
        for g in grads {
            opt.step(&mut p, &[g]).unwrap();
        }
        assert!((p[0] - x).abs() < 1e-12);
        assert_eq!(opt.step_count(), 3);
    }

    #[test]
    fn non_finite_gradient_aborts_update() {
        let mut opt = Adam::new(2, 1e-3);
        let mut p = vec![1.0, 1.0];
        let err = opt.step(&mut p, &[f64::NAN, 0.1]).unwrap_err();
        assert!(matches!(err, Error::NonFinite(_)));
        assert_eq!(p, vec![1.0, 1.0]);
        assert_eq!(opt.step_count(), 0);
        assert!(opt.first_moment().iter().all(|&m| m == 0.0));
    }
}
