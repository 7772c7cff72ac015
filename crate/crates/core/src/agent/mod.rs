//! Expectimax agents over the speed prior, and toy environments to run them in.

mod encoding;
mod env;
mod episode;
mod expectimax;

pub use encoding::{encode_steps, Alphabets, Step};
pub use env::{Environment, EnvironmentSpec, ObservationSource, RewardRule};
pub use episode::{laplace_values, run_episode, AgentConfig, AgentKind, Episode, EpisodeStep};
pub use expectimax::{
    aixi_spd_action, aixiq_action, argmax, expectimax, horizon_epsilon, ActionDecision,
    DEFAULT_CONFIDENCE_K, DEFAULT_DEPTH, DEFAULT_MAX_LEAVES, DEFAULT_WINDOW,
};
