use rand::Rng;

use crate::env::{Environment, scale_action};
use crate::nn::GaussianPolicy;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub mean_return: f64,
    /// Undiscounted environment return of each episode.
    pub returns: Vec<f64>,
}

/// Runs `episodes` full episodes. With `deterministic` the policy mean is
/// used; otherwise actions are sampled from `rng`. Returns are sums of the
/// environment rewards, never shaped ones.
pub fn evaluate_policy<R: Rng + ?Sized>(
    env: &mut dyn Environment,
    policy: &GaussianPolicy,
    episodes: usize,
    rng: &mut R,
    deterministic: bool,
) -> Result<Evaluation> {
    if episodes == 0 {
        return Err(Error::config("eval_episodes", "must be at least 1"));
    }
    let mut returns = Vec::with_capacity(episodes);
    for _ in 0..episodes {
        let mut obs = env.reset();
        let mut total = 0.0;
        loop {
            let (action, _) = policy.act(&obs, rng, deterministic)?;
            let step = env.step(&scale_action(&action, env.action_bound()))?;
            total += step.reward;
            if step.done {
                break;
            }
            obs = step.observation;
        }
        returns.push(total);
    }
    let mean_return = returns.iter().sum::<f64>() / episodes as f64;
    Ok(Evaluation {
        mean_return,
        returns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{ObjectSpec, PointMass, PointMassConfig};
    use crate::nn::Mlp;
    use crate::seeding;
    use rand::SeedableRng;

    fn policy_with_mean_bias(bias: [f64; 2], obs_dim: usize) -> GaussianPolicy {
        let mut net = Mlp::zeros(&[obs_dim, 2]).unwrap();
        let n = net.param_count();
        net.params_mut()[n - 2..].copy_from_slice(&bias);
        GaussianPolicy {
            net,
            log_std: vec![0.0; 2],
        }
    }

    #[test]
    fn zero_reward_env_scores_zero() {
        let config = PointMassConfig {
            objects: vec![],
            actuation_cost: 0.0,
            ..PointMassConfig::default()
        };
        let mut env = PointMass::new(config, 0);
        let p = policy_with_mean_bias([0.3, -0.2], 2);
        let mut rng = seeding::Rng::seed_from_u64(0);
        let e = evaluate_policy(&mut env, &p, 3, &mut rng, false).unwrap();
        assert_eq!(e.mean_return, 0.0);
        assert_eq!(e.returns.len(), 3);
    }

    #[test]
    fn deterministic_evaluation_repeats() {
        let mut env = PointMass::new(PointMassConfig { start_jitter: 0.0, ..Default::default() }, 0);
        let p = policy_with_mean_bias([0.01, 0.04], 30);
        let mut rng = seeding::Rng::seed_from_u64(0);
        let a = evaluate_policy(&mut env, &p, 2, &mut rng, true).unwrap();
        let b = evaluate_policy(&mut env, &p, 2, &mut rng, true).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scripted_straight_line_to_green() {
        // Green straight above the start; constant upward action of 0.05.
        let config = PointMassConfig {
            objects: vec![ObjectSpec::new(0.5, 0.75, 10.0)],
            start: [0.5, 0.15],
            start_jitter: 0.0,
            ..PointMassConfig::default()
        };
        let mut env = PointMass::new(config, 0);
        let p = policy_with_mean_bias([0.0, 1.0], 6);
        let mut rng = seeding::Rng::seed_from_u64(0);
        let e = evaluate_policy(&mut env, &p, 1, &mut rng, true).unwrap();
        // The agent keeps moving until it hits the wall: it moves on every one
        // of the 128 steps, each costing 0.1 * 0.05.
        let expected = 10.0 - 128.0 * 0.1 * 0.05;
        assert!((e.mean_return - expected).abs() < 1e-9, "{}", e.mean_return);
    }
}
