use crate::env::discounted_return;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub observation: Vec<f64>,
    /// Action as applied by the environment (after clipping).
    pub action: Vec<f64>,
    pub reward: f64,
}

/// A finished (or truncated) episode with its discounted return cached.
/// Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    transitions: Vec<Transition>,
    terminal: bool,
    discounted_return: f64,
}

impl Episode {
    pub fn new(transitions: Vec<Transition>, terminal: bool, gamma: f64) -> Self {
        let rewards: Vec<f64> = transitions.iter().map(|t| t.reward).collect();
        Self {
            discounted_return: discounted_return(&rewards, gamma),
            transitions,
            terminal,
        }
    }

    /// Builds an episode with an explicitly supplied return (snapshot loading).
    pub fn with_return(transitions: Vec<Transition>, terminal: bool, discounted_return: f64) -> Self {
        Self {
            transitions,
            terminal,
            discounted_return,
        }
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn is_terminal(&self) -> bool {
        self.terminal
    }

    pub fn discounted_return(&self) -> f64 {
        self.discounted_return
    }

    /// Sum of rewards without discounting.
    pub fn total_reward(&self) -> f64 {
        self.transitions.iter().map(|t| t.reward).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn return_is_cached_discounted_sum() {
        let ts = [1.0, 2.0, 3.0]
            .iter()
            .map(|&r| Transition {
                observation: vec![0.0],
                action: vec![0.0],
                reward: r,
            })
            .collect();
        let ep = Episode::new(ts, true, 0.99);
        assert_eq!(ep.discounted_return(), discounted_return(&[1.0, 2.0, 3.0], 0.99));
        assert_eq!(ep.total_reward(), 6.0);
        assert_eq!(ep.len(), 3);
    }
}
