use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{DelayedReward, Environment, ObservationNoise, PointMass, PointMassConfig};
use crate::seeding::child_seed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvKind {
    PointMass,
}

/// Plain-text environment description, e.g.
///
/// ```toml
/// env = "point_mass"
/// delay = 20
/// obs_noise = 0.1
/// seed = 0
/// objects = [
///   { position = [0.25, 0.80], value = 10.0, radius = 0.06 },
/// ]
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvConfig {
    pub env: EnvKind,
    /// Reward release period; 1 means no delay.
    pub delay: usize,
    pub obs_noise: f64,
    pub seed: u64,
    #[serde(flatten)]
    pub point_mass: PointMassConfig,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            env: EnvKind::PointMass,
            delay: 1,
            obs_noise: 0.0,
            seed: 0,
            point_mass: PointMassConfig::default(),
        }
    }
}

impl EnvConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Format {
            what: "environment config",
            reason: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("env config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.delay == 0 {
            return Err(Error::config("delay", "must be at least 1"));
        }
        if !(self.obs_noise >= 0.0 && self.obs_noise.is_finite()) {
            return Err(Error::config("obs_noise", "must be a finite value >= 0"));
        }
        let pm = &self.point_mass;
        if pm.episode_length == 0 {
            return Err(Error::config("episode_length", "must be positive"));
        }
        if !(pm.max_speed > 0.0) {
            return Err(Error::config("max_speed", "must be positive"));
        }
        if !(pm.actuation_cost >= 0.0) {
            return Err(Error::config("actuation_cost", "must be >= 0"));
        }
        if pm.objects.iter().any(|o| !(o.radius > 0.0)) {
            return Err(Error::config("objects", "radii must be positive"));
        }
        Ok(())
    }

    /// Builds the wrapped environment using this config's own seed.
    pub fn build_default(&self) -> Result<Box<dyn Environment>> {
        self.build(self.seed)
    }

    /// Builds the environment with wrappers applied: observation noise first,
    /// then reward delay. Each layer draws from its own seed.
    pub fn build(&self, seed: u64) -> Result<Box<dyn Environment>> {
        self.validate()?;
        let base = match self.env {
            EnvKind::PointMass => PointMass::new(self.point_mass.clone(), child_seed(seed, 1)),
        };
        let env: Box<dyn Environment> = if self.obs_noise > 0.0 {
            Box::new(ObservationNoise::new(base, self.obs_noise, child_seed(seed, 2))?)
        } else {
            Box::new(base)
        };
        Ok(if self.delay > 1 {
            Box::new(DelayedReward::new(env, self.delay)?)
        } else {
            env
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_plain_key_value_file() {
        let text = r#"
            env = "point_mass"
            delay = 20
            obs_noise = 0.1
            seed = 0
            objects = [
              { position = [0.2, 0.8], value = 10.0, radius = 0.05 },
              { position = [0.6, 0.4], value = -5.0, radius = 0.06 },
            ]
        "#;
        let c = EnvConfig::from_toml_str(text).unwrap();
        assert_eq!(c.delay, 20);
        assert_eq!(c.obs_noise, 0.1);
        assert_eq!(c.point_mass.objects.len(), 2);
        assert_eq!(c.point_mass.objects[0].radius, 0.05);
        assert_eq!(c.point_mass.episode_length, 128);
        let env = c.build_default().unwrap();
        assert_eq!(env.observation_dim(), 10);
    }

    #[test]
    fn round_trips_through_toml() {
        let c = EnvConfig {
            delay: 7,
            ..EnvConfig::default()
        };
        assert_eq!(EnvConfig::from_toml_str(&c.to_toml_string()).unwrap(), c);
    }

    #[test]
    fn rejects_zero_delay_with_field_name() {
        match EnvConfig::from_toml_str("delay = 0") {
            Err(Error::Config { field, .. }) => assert_eq!(field, "delay"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
