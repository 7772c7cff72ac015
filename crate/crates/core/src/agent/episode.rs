use rand::Rng;
use serde::Serialize;

use super::encoding::Step;
use super::env::{Environment, EnvironmentSpec};
use super::expectimax::{aixi_spd_action, aixiq_action, argmax, DEFAULT_DEPTH, DEFAULT_WINDOW};
use crate::error::{Error, Result};
use crate::machine::Machine;
use crate::prior::{laplace_rule, PriorParams, SpeedPrior};
use crate::rng::stream;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AgentKind {
    AixiSpd,
    Aixiq,
    LaplaceBaseline,
    Random,
}

#[derive(Clone, Debug)]
pub struct AgentConfig {
    /// Lookahead `m − k + 1`.
    pub depth: usize,
    pub window: usize,
    pub epsilon_override: Option<f64>,
    pub k_confidence: Option<f64>,
    pub prior: PriorParams,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            depth: DEFAULT_DEPTH,
            window: DEFAULT_WINDOW,
            epsilon_override: None,
            k_confidence: None,
            prior: PriorParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpisodeStep {
    pub step: usize,
    pub action: usize,
    pub observation: usize,
    pub reward: bool,
    pub value_table: Option<Vec<f64>>,
    pub prior_calls: u64,
    pub epsilon_used: Option<f64>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Episode {
    pub agent: AgentKind,
    pub seed: u64,
    pub steps: Vec<EpisodeStep>,
    pub cumulative_reward: u64,
}

struct Choice {
    action: usize,
    values: Option<Vec<f64>>,
    prior_calls: u64,
    epsilon_used: Option<f64>,
}

/// Runs `length` agent/environment exchanges.
///
/// The environment draws from stream 0 of `seed` and the agent from stream 1.
pub fn run_episode(
    machine: &dyn Machine,
    env: &EnvironmentSpec,
    agent: AgentKind,
    length: usize,
    seed: u64,
    config: &AgentConfig,
) -> Result<Episode> {
    if length == 0 {
        return Err(Error::Argument("episode length must be at least 1".into()));
    }
    env.validate()?;
    let alphabets = env.alphabets;
    let mut world = Environment::new(env.clone(), stream(seed, 0));
    let mut rng = stream(seed, 1);
    let prior = SpeedPrior::new(machine, config.prior.clone());
    let mut history: Vec<Step> = Vec::with_capacity(length);
    let mut steps = Vec::with_capacity(length);
    let mut total = 0;
    for k in 1..=length {
        let choice = match agent {
            AgentKind::AixiSpd => {
                let d = aixi_spd_action(&prior, &history, &alphabets, config.depth, config.window)?;
                Choice {
                    action: d.action,
                    values: Some(d.values),
                    prior_calls: d.prior_calls,
                    epsilon_used: None,
                }
            }
            AgentKind::Aixiq => {
                let d = aixiq_action(
                    &prior,
                    &history,
                    &alphabets,
                    config.depth,
                    config.window,
                    config.epsilon_override,
                    config.k_confidence,
                    &mut rng,
                )?;
                Choice {
                    action: d.action,
                    values: Some(d.values),
                    prior_calls: d.prior_calls,
                    epsilon_used: d.epsilon_used,
                }
            }
            AgentKind::LaplaceBaseline => {
                let values = laplace_values(&history, alphabets.actions)?;
                Choice {
                    action: argmax(&values),
                    values: Some(values),
                    prior_calls: 0,
                    epsilon_used: None,
                }
            }
            AgentKind::Random => Choice {
                action: rng.gen_range(0..alphabets.actions),
                values: None,
                prior_calls: 0,
                epsilon_used: None,
            },
        };
        let s = world.respond(choice.action);
        total += u64::from(s.reward);
        history.push(s);
        steps.push(EpisodeStep {
            step: k,
            action: s.action,
            observation: s.observation,
            reward: s.reward,
            value_table: choice.values,
            prior_calls: choice.prior_calls,
            epsilon_used: choice.epsilon_used,
            seed,
        });
    }
    Ok(Episode {
        agent,
        seed,
        steps,
        cumulative_reward: total,
    })
}

/// Rule-of-succession estimate of `P(r = 1 | a)` for each action.
pub fn laplace_values(history: &[Step], actions: usize) -> Result<Vec<f64>> {
    (0..actions)
        .map(|a| {
            let tried = history.iter().filter(|s| s.action == a);
            let n = tried.clone().count() as u64;
            let ones = tried.filter(|s| s.reward).count() as u64;
            laplace_rule(ones, n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Sk2;

    #[test]
    fn episodes_are_reproducible() {
        let env = EnvironmentSpec::biased_coin(0.5).unwrap();
        let cfg = AgentConfig::default();
        for kind in [
            AgentKind::Random,
            AgentKind::LaplaceBaseline,
            AgentKind::AixiSpd,
        ] {
            let a = run_episode(&Sk2, &env, kind, 8, 11, &cfg).unwrap();
            let b = run_episode(&Sk2, &env, kind, 8, 11, &cfg).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.steps.len(), 8);
            assert_eq!(
                a.cumulative_reward,
                a.steps.iter().filter(|s| s.reward).count() as u64
            );
        }
    }

    #[test]
    fn zero_length_is_rejected() {
        let env = EnvironmentSpec::biased_coin(0.5).unwrap();
        assert!(run_episode(&Sk2, &env, AgentKind::Random, 0, 1, &AgentConfig::default()).is_err());
    }

    #[test]
    fn laplace_prefers_rewarded_action() {
        let h = [
            Step {
                action: 1,
                observation: 1,
                reward: true,
            },
            Step {
                action: 0,
                observation: 1,
                reward: false,
            },
        ];
        let v = laplace_values(&h, 2).unwrap();
        assert_eq!(v, vec![1.0 / 3.0, 2.0 / 3.0]);
    }
}
