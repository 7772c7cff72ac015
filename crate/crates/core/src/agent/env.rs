use rand::Rng;
use serde::Serialize;

use super::encoding::{Alphabets, Step};
use crate::error::{Error, Result};
use crate::rng::SimRng;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservationSource {
    /// Cycles through the listed observations.
    Pattern(Vec<usize>),
    /// Observation 1 with probability `p`, else 0.
    BiasedCoin(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RewardRule {
    /// Reward 1 when the action equals the observation emitted this step.
    MatchCurrent,
    /// Reward 1 when the action equals the previous observation; 0 on step 1.
    MatchLast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvironmentSpec {
    pub observations: ObservationSource,
    pub reward: RewardRule,
    pub alphabets: Alphabets,
}

impl EnvironmentSpec {
    /// Repeating pattern, rewarded for echoing the previous observation.
    pub fn pattern(pattern: Vec<usize>) -> Result<Self> {
        let spec = EnvironmentSpec {
            observations: ObservationSource::Pattern(pattern),
            reward: RewardRule::MatchLast,
            alphabets: Alphabets::binary(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Coin flips, rewarded for calling the current flip.
    pub fn biased_coin(p: f64) -> Result<Self> {
        let spec = EnvironmentSpec {
            observations: ObservationSource::BiasedCoin(p),
            reward: RewardRule::MatchCurrent,
            alphabets: Alphabets::binary(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match &self.observations {
            ObservationSource::Pattern(p) => {
                if p.is_empty() {
                    return Err(Error::Argument("observation pattern is empty".into()));
                }
                if let Some(o) = p.iter().find(|&&o| o >= self.alphabets.observations) {
                    return Err(Error::Argument(format!(
                        "pattern symbol {o} outside the observation alphabet"
                    )));
                }
            }
            ObservationSource::BiasedCoin(p) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::Argument(format!("coin bias {p} outside [0, 1]")));
                }
                if self.alphabets.observations < 2 {
                    return Err(Error::Argument("a coin needs two observations".into()));
                }
            }
        }
        Ok(())
    }
}

/// A running environment.
pub struct Environment {
    spec: EnvironmentSpec,
    rng: SimRng,
    step: usize,
    last: Option<usize>,
}

impl Environment {
    pub fn new(spec: EnvironmentSpec, rng: SimRng) -> Self {
        Environment {
            spec,
            rng,
            step: 0,
            last: None,
        }
    }

    pub fn spec(&self) -> &EnvironmentSpec {
        &self.spec
    }

    /// Percept answering `action`.
    pub fn respond(&mut self, action: usize) -> Step {
        let observation = match &self.spec.observations {
            ObservationSource::Pattern(p) => p[self.step % p.len()],
            ObservationSource::BiasedCoin(p) => usize::from(self.rng.gen_bool(*p)),
        };
        let reward = match self.spec.reward {
            RewardRule::MatchCurrent => action == observation,
            RewardRule::MatchLast => self.last == Some(action),
        };
        self.step += 1;
        self.last = Some(observation);
        Step {
            action,
            observation,
            reward,
        }
    }
}
