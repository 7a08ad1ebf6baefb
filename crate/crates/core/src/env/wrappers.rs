use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use super::{EnvStep, Environment};
use crate::seeding;
use crate::{Error, Result};

/// Withholds rewards and releases their sum every `delay` steps and at
/// episode end. Per-episode reward sums are conserved exactly.
#[derive(Debug)]
pub struct DelayedReward<E> {
    inner: E,
    delay: usize,
    accumulated: f64,
    since_release: usize,
}

impl<E: Environment> DelayedReward<E> {
    pub fn new(inner: E, delay: usize) -> Result<Self> {
        if delay == 0 {
            return Err(Error::config("delay", "must be at least 1"));
        }
        Ok(Self {
            inner,
            delay,
            accumulated: 0.0,
            since_release: 0,
        })
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }
}

impl<E: Environment> Environment for DelayedReward<E> {
    fn observation_dim(&self) -> usize {
        self.inner.observation_dim()
    }

    fn action_dim(&self) -> usize {
        self.inner.action_dim()
    }

    fn action_bound(&self) -> f64 {
        self.inner.action_bound()
    }

    fn reset(&mut self) -> Vec<f64> {
        self.accumulated = 0.0;
        self.since_release = 0;
        self.inner.reset()
    }

    fn step(&mut self, action: &[f64]) -> Result<EnvStep> {
        let mut step = self.inner.step(action)?;
        self.accumulated += step.reward;
        self.since_release += 1;
        if self.since_release == self.delay || step.done {
            step.reward = self.accumulated;
            self.accumulated = 0.0;
            self.since_release = 0;
        } else {
            step.reward = 0.0;
        }
        Ok(step)
    }
}

/// Adds i.i.d. `N(0, sigma^2)` noise to every observation component.
#[derive(Debug)]
pub struct ObservationNoise<E> {
    inner: E,
    sigma: f64,
    rng: seeding::Rng,
}

impl<E: Environment> ObservationNoise<E> {
    pub fn new(inner: E, sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::config("obs_noise", "must be a finite value >= 0"));
        }
        Ok(Self {
            inner,
            sigma,
            rng: seeding::Rng::seed_from_u64(seed),
        })
    }

    fn corrupt(&mut self, obs: &mut [f64]) {
        if self.sigma == 0.0 {
            return;
        }
        for v in obs {
            let z: f64 = self.rng.sample(StandardNormal);
            *v += self.sigma * z;
        }
    }
}

impl<E: Environment> Environment for ObservationNoise<E> {
    fn observation_dim(&self) -> usize {
        self.inner.observation_dim()
    }

    fn action_dim(&self) -> usize {
        self.inner.action_dim()
    }

    fn action_bound(&self) -> f64 {
        self.inner.action_bound()
    }

    fn reset(&mut self) -> Vec<f64> {
        let mut obs = self.inner.reset();
        self.corrupt(&mut obs);
        obs
    }

    fn step(&mut self, action: &[f64]) -> Result<EnvStep> {
        let mut step = self.inner.step(action)?;
        self.corrupt(&mut step.observation);
        Ok(step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::StepInfo;

    /// Replays a fixed reward script; episode ends with the script.
    struct Scripted {
        rewards: Vec<f64>,
        t: usize,
    }

    impl Environment for Scripted {
        fn observation_dim(&self) -> usize {
            1
        }
        fn action_dim(&self) -> usize {
            1
        }
        fn action_bound(&self) -> f64 {
            1.0
        }
        fn reset(&mut self) -> Vec<f64> {
            self.t = 0;
            vec![0.0]
        }
        fn step(&mut self, _action: &[f64]) -> Result<EnvStep> {
            let r = self.rewards[self.t];
            self.t += 1;
            Ok(EnvStep {
                observation: vec![self.t as f64],
                reward: r,
                done: self.t == self.rewards.len(),
                info: StepInfo {
                    raw_reward: r,
                    objects_collected: 0,
                },
            })
        }
    }

    fn run_delayed(rewards: &[f64], delay: usize) -> Vec<f64> {
        let mut env = DelayedReward::new(
            Scripted {
                rewards: rewards.to_vec(),
                t: 0,
            },
            delay,
        )
        .unwrap();
        env.reset();
        rewards.iter().map(|_| env.step(&[0.0]).unwrap().reward).collect()
    }

    #[test]
    fn delay_one_is_identity() {
        let r = [0.5, -1.25, 3.0];
        assert_eq!(run_delayed(&r, 1), r.to_vec());
    }

    #[test]
    fn hand_simulated_release_pattern() {
        assert_eq!(run_delayed(&[1.0, 2.0, 3.0, 4.0, 5.0], 2), vec![0.0, 3.0, 0.0, 7.0, 5.0]);
    }

    #[test]
    fn delay_twenty_releases_on_multiples_and_at_end() {
        let rewards = vec![1.0; 45];
        let out = run_delayed(&rewards, 20);
        for (t, r) in out.iter().enumerate() {
            let expect = match t {
                19 | 39 => 20.0,
                44 => 5.0,
                _ => 0.0,
            };
            assert_eq!(*r, expect, "t={t}");
        }
    }

    #[test]
    fn zero_delay_rejected() {
        let inner = Scripted {
            rewards: vec![],
            t: 0,
        };
        assert!(DelayedReward::new(inner, 0).is_err());
    }

    #[test]
    fn zero_sigma_is_identity() {
        let script = || Scripted {
            rewards: vec![1.0, 2.0],
            t: 0,
        };
        let mut noisy = ObservationNoise::new(script(), 0.0, 9).unwrap();
        let mut plain = script();
        assert_eq!(noisy.reset(), plain.reset());
        assert_eq!(noisy.step(&[0.0]).unwrap(), plain.step(&[0.0]).unwrap());
    }

    #[test]
    fn noise_variance_matches_sigma_squared() {
        let sigma = 0.1;
        let mut env = ObservationNoise::new(
            Scripted {
                rewards: vec![0.0; 100_000],
                t: 0,
            },
            sigma,
            4,
        )
        .unwrap();
        env.reset();
        let n = 100_000;
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for t in 0..n {
            let s = env.step(&[0.0]).unwrap();
            let e = s.observation[0] - (t + 1) as f64;
            sum += e;
            sum_sq += e * e;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!((var - sigma * sigma).abs() / (sigma * sigma) < 0.05, "var={var}");
    }

    #[test]
    fn negative_sigma_rejected() {
        let inner = Scripted {
            rewards: vec![],
            t: 0,
        };
        assert!(ObservationNoise::new(inner, -0.1, 0).is_err());
    }
}
