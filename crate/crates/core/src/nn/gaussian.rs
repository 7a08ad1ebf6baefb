use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result};

pub const LOG_STD_MIN: f64 = -20.0;
pub const LOG_STD_MAX: f64 = 2.0;

const HALF_LOG_2PI: f64 = 0.918_938_533_204_672_7;

/// Diagonal Gaussian over actions. `log_std` is clamped to
/// `[LOG_STD_MIN, LOG_STD_MAX]` on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalGaussian {
    mean: Vec<f64>,
    log_std: Vec<f64>,
}

impl DiagonalGaussian {
    pub fn new(mean: Vec<f64>, log_std: &[f64]) -> Result<Self> {
        if mean.len() != log_std.len() {
            return Err(Error::InputShape {
                expected: mean.len(),
                actual: log_std.len(),
            });
        }
        let log_std = log_std.iter().map(|s| s.clamp(LOG_STD_MIN, LOG_STD_MAX)).collect();
        Ok(Self { mean, log_std })
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn log_std(&self) -> &[f64] {
        &self.log_std
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn log_prob(&self, action: &[f64]) -> Result<f64> {
        if action.len() != self.dim() {
            return Err(Error::InputShape {
                expected: self.dim(),
                actual: action.len(),
            });
        }
        Ok(self
            .mean
            .iter()
            .zip(&self.log_std)
            .zip(action)
            .map(|((&mu, &ls), &a)| {
                let z = (a - mu) / ls.exp();
                -0.5 * z * z - ls - HALF_LOG_2PI
            })
            .sum())
    }

    pub fn entropy(&self) -> f64 {
        self.log_std.iter().map(|ls| ls + 0.5 + HALF_LOG_2PI).sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.mean
            .iter()
            .zip(&self.log_std)
            .map(|(&mu, &ls)| {
                let z: f64 = rng.sample(StandardNormal);
                mu + ls.exp() * z
            })
            .collect()
    }

    /// Partial derivatives of `log_prob(action)` with respect to the mean and
    /// the (unclamped) log-std parameters. `raw_log_std` is consulted so the
    /// clamp passes zero gradient when saturated.
    pub fn log_prob_grads(&self, action: &[f64], raw_log_std: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut d_mean = Vec::with_capacity(self.dim());
        let mut d_log_std = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let inv_var = (-2.0 * self.log_std[i]).exp();
            let diff = action[i] - self.mean[i];
            d_mean.push(diff * inv_var);
            let active = (LOG_STD_MIN..=LOG_STD_MAX).contains(&raw_log_std[i]);
            d_log_std.push(if active { diff * diff * inv_var - 1.0 } else { 0.0 });
        }
        (d_mean, d_log_std)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeding;
    use rand::SeedableRng;

    #[test]
    fn standard_normal_mode() {
        let d = DiagonalGaussian::new(vec![0.0], &[0.0]).unwrap();
        assert!((d.log_prob(&[0.0]).unwrap() - (-0.918_938_533_204_672_7)).abs() < 1e-15);
        assert!((d.log_prob(&[0.0]).unwrap() + 0.918939).abs() < 1e-6);
    }

    #[test]
    fn mode_with_sigma_e() {
        let d = DiagonalGaussian::new(vec![0.4], &[1.0]).unwrap();
        let expected = -1.0 - 0.5 * (2.0 * std::f64::consts::PI).ln();
        assert!((d.log_prob(&[0.4]).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn three_dim_matches_product_of_densities() {
        let mean = vec![0.3, -1.2, 0.05];
        let log_std = [-0.5, 0.7, -2.0];
        let action = [0.1, 0.4, 0.02];
        let d = DiagonalGaussian::new(mean.clone(), &log_std).unwrap();
        // termwise density oracle
        let mut density = 1.0;
        for i in 0..3 {
            let s = f64::exp(log_std[i]);
            let z = (action[i] - mean[i]) / s;
            density *= (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt());
        }
        assert!((d.log_prob(&action).unwrap() - density.ln()).abs() < 1e-12);
    }

    #[test]
    fn entropy_closed_form() {
        let one = DiagonalGaussian::new(vec![0.0], &[0.0]).unwrap();
        assert!((one.entropy() - 1.418939).abs() < 1e-6);
        let two = DiagonalGaussian::new(vec![0.0, 0.0], &[0.0, 0.0]).unwrap();
        assert!((two.entropy() - 2.837877).abs() < 1e-6);
    }

    #[test]
    fn entropy_matches_monte_carlo() {
        let d = DiagonalGaussian::new(vec![0.2, -0.1], &[0.3, -0.8]).unwrap();
        let mut rng = seeding::Rng::seed_from_u64(11);
        let n = 100_000;
        let mc: f64 = (0..n)
            .map(|_| -d.log_prob(&d.sample(&mut rng)).unwrap())
            .sum::<f64>()
            / n as f64;
        assert!((mc - d.entropy()).abs() / d.entropy().abs() < 0.02);
    }

    #[test]
    fn clamp_floor_collapses_samples_to_mean() {
        let d = DiagonalGaussian::new(vec![0.7, -0.3], &[-50.0, -50.0]).unwrap();
        assert_eq!(d.log_std(), &[LOG_STD_MIN, LOG_STD_MIN]);
        let mut rng = seeding::Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = d.sample(&mut rng);
            assert!((a[0] - 0.7).abs() < 1e-8 && (a[1] + 0.3).abs() < 1e-8);
        }
    }

    #[test]
    fn sample_is_seed_deterministic() {
        let d = DiagonalGaussian::new(vec![0.0; 3], &[0.0; 3]).unwrap();
        let a = d.sample(&mut seeding::Rng::seed_from_u64(5));
        let b = d.sample(&mut seeding::Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    #[test]
    fn sample_mean_within_three_standard_errors() {
        let d = DiagonalGaussian::new(vec![1.5, -0.5], &[0.0, 0.5]).unwrap();
        let mut rng = seeding::Rng::seed_from_u64(99);
        let n = 100_000;
        let mut sum = [0.0; 2];
        for _ in 0..n {
            let a = d.sample(&mut rng);
            sum[0] += a[0];
            sum[1] += a[1];
        }
        for i in 0..2 {
            let se = d.log_std()[i].exp() / (n as f64).sqrt();
            assert!((sum[i] / n as f64 - d.mean()[i]).abs() < 3.0 * se);
        }
    }

    #[test]
    fn log_prob_grads_match_finite_differences() {
        let mean = vec![0.3, -0.2];
        let ls = [0.1, -0.4];
        let a = [0.9, 0.1];
        let d = DiagonalGaussian::new(mean.clone(), &ls).unwrap();
        let (gm, gs) = d.log_prob_grads(&a, &ls);
        let h = 1e-6;
        for i in 0..2 {
            let mut mp = mean.clone();
            mp[i] += h;
            let mut mm = mean.clone();
            mm[i] -= h;
            let fd = (DiagonalGaussian::new(mp, &ls).unwrap().log_prob(&a).unwrap()
                - DiagonalGaussian::new(mm, &ls).unwrap().log_prob(&a).unwrap())
                / (2.0 * h);
            assert!((fd - gm[i]).abs() < 1e-7);
            let mut sp = ls;
            sp[i] += h;
            let mut sm = ls;
            sm[i] -= h;
            let fd = (DiagonalGaussian::new(mean.clone(), &sp).unwrap().log_prob(&a).unwrap()
                - DiagonalGaussian::new(mean.clone(), &sm).unwrap().log_prob(&a).unwrap())
                / (2.0 * h);
            assert!((fd - gs[i]).abs() < 1e-7);
        }
    }
}
