use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{EnvStep, Environment, StepInfo};
use crate::seeding;
use crate::{Error, Result};
use rand::SeedableRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectSpec {
    pub position: [f64; 2],
    pub value: f64,
    pub radius: f64,
}

impl ObjectSpec {
    pub fn new(x: f64, y: f64, value: f64) -> Self {
        Self {
            position: [x, y],
            value,
            radius: 0.06,
        }
    }
}

/// Geometry and dynamics of the point-mass arena `[0, 1]^2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PointMassConfig {
    pub objects: Vec<ObjectSpec>,
    pub start: [f64; 2],
    /// Half-width of the uniform box the start position is drawn from.
    pub start_jitter: f64,
    pub episode_length: usize,
    pub max_speed: f64,
    pub actuation_cost: f64,
}

impl Default for PointMassConfig {
    /// Two green (+10) objects on the top row with an orange (-5) between
    /// them and one on each outer flank. Two blue (+5) objects sit low and
    /// close to the start, which makes them the easy local optimum.
    fn default() -> Self {
        Self {
            objects: vec![
                ObjectSpec::new(0.25, 0.80, 10.0),
                ObjectSpec::new(0.75, 0.80, 10.0),
                ObjectSpec::new(0.25, 0.40, 5.0),
                ObjectSpec::new(0.75, 0.40, 5.0),
                ObjectSpec::new(0.15, 0.68, -5.0),
                ObjectSpec::new(0.85, 0.68, -5.0),
                ObjectSpec::new(0.50, 0.80, -5.0),
            ],
            start: [0.5, 0.15],
            start_jitter: 0.1,
            episode_length: 128,
            max_speed: 0.05,
            actuation_cost: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointMassState {
    pub position: [f64; 2],
    pub collected: Vec<bool>,
    pub steps: usize,
    pub done: bool,
}

/// Agent moving at bounded velocity, collecting objects once each.
#[derive(Debug, Clone)]
pub struct PointMass {
    config: PointMassConfig,
    state: PointMassState,
    rng: seeding::Rng,
}

impl PointMass {
    pub fn new(config: PointMassConfig, seed: u64) -> Self {
        let n = config.objects.len();
        let state = PointMassState {
            position: config.start,
            collected: vec![false; n],
            steps: 0,
            // must reset before the first step
            done: true,
        };
        Self {
            config,
            state,
            rng: seeding::Rng::seed_from_u64(seed),
        }
    }

    pub fn config(&self) -> &PointMassConfig {
        &self.config
    }

    pub fn state(&self) -> &PointMassState {
        &self.state
    }

    /// Observation for an arbitrary agent position and collection state.
    pub fn observation_for(config: &PointMassConfig, position: [f64; 2], collected: &[bool]) -> Vec<f64> {
        let mut obs = Vec::with_capacity(2 + 4 * config.objects.len());
        obs.extend_from_slice(&position);
        for (obj, &taken) in config.objects.iter().zip(collected) {
            obs.push(obj.position[0] - position[0]);
            obs.push(obj.position[1] - position[1]);
            obs.push(if taken { 1.0 } else { 0.0 });
            obs.push(obj.value / 10.0);
        }
        obs
    }

    fn observation(&self) -> Vec<f64> {
        Self::observation_for(&self.config, self.state.position, &self.state.collected)
    }
}

impl Environment for PointMass {
    fn observation_dim(&self) -> usize {
        2 + 4 * self.config.objects.len()
    }

    fn action_dim(&self) -> usize {
        2
    }

    fn action_bound(&self) -> f64 {
        self.config.max_speed
    }

    fn reset(&mut self) -> Vec<f64> {
        let mut position = self.config.start;
        if self.config.start_jitter > 0.0 {
            let j = self.config.start_jitter;
            for p in &mut position {
                *p = (*p + self.rng.random_range(-j..=j)).clamp(0.0, 1.0);
            }
        }
        self.state = PointMassState {
            position,
            collected: vec![false; self.config.objects.len()],
            steps: 0,
            done: false,
        };
        self.observation()
    }

    fn step(&mut self, action: &[f64]) -> Result<EnvStep> {
        if self.state.done {
            return Err(Error::StepAfterDone);
        }
        if action.len() != 2 {
            return Err(Error::InputShape {
                expected: 2,
                actual: action.len(),
            });
        }
        if action.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("point-mass action"));
        }
        let bound = self.config.max_speed;
        let a = [action[0].clamp(-bound, bound), action[1].clamp(-bound, bound)];
        let pos = &mut self.state.position;
        pos[0] = (pos[0] + a[0]).clamp(0.0, 1.0);
        pos[1] = (pos[1] + a[1]).clamp(0.0, 1.0);

        let mut reward = 0.0;
        for (obj, taken) in self.config.objects.iter().zip(self.state.collected.iter_mut()) {
            if *taken {
                continue;
            }
            let dx = obj.position[0] - pos[0];
            let dy = obj.position[1] - pos[1];
            if dx * dx + dy * dy <= obj.radius * obj.radius {
                *taken = true;
                reward += obj.value;
            }
        }
        reward -= self.config.actuation_cost * (a[0] * a[0] + a[1] * a[1]).sqrt();

        self.state.steps += 1;
        self.state.done = self.state.steps >= self.config.episode_length;
        let objects_collected = self.state.collected.iter().filter(|&&c| c).count();
        Ok(EnvStep {
            observation: self.observation(),
            reward,
            done: self.state.done,
            info: StepInfo {
                raw_reward: reward,
                objects_collected,
            },
        })
    }
}
