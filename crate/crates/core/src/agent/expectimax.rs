use serde::Serialize;

use super::encoding::{encode_steps, Alphabets, Step};
use crate::error::{Error, Result};
use crate::prior::{PriorMethod, SpeedPrior};
use rand::Rng;

pub const DEFAULT_DEPTH: usize = 2;
pub const DEFAULT_WINDOW: usize = 1;
pub const DEFAULT_MAX_LEAVES: u64 = 1 << 16;
/// Confidence parameter of the AIXIq definition.
pub const DEFAULT_CONFIDENCE_K: f64 = 100.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ActionDecision {
    pub action: usize,
    /// Expectimax value of each candidate action.
    pub values: Vec<f64>,
    pub prior_calls: u64,
    pub method: PriorMethod,
    pub epsilon_used: Option<f64>,
    pub k_used: Option<f64>,
    /// Lookahead `m − k + 1`.
    pub depth: usize,
    /// Completed steps of history included in the conditioned strings.
    pub window: usize,
}

/// Index of the first maximal value.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// `1/(n·m·2^{|O||A|(m−k)})`.
pub fn horizon_epsilon(
    width: usize,
    horizon: usize,
    lookahead: usize,
    observations: usize,
    actions: usize,
) -> f64 {
    let exp = (observations * actions * lookahead) as i32;
    0.5f64.powi(exp) / (width * horizon) as f64
}

/// Expectimax over `depth` future steps after `window`:
/// `max_a Σ_{o r} … max_a Σ_{o r} [r_k + … + r_m] · W(percepts | actions)`,
/// with `W` evaluated once per complete leaf.
///
/// Returns the value of each first action and the number of leaves weighed.
pub fn expectimax<F>(
    alphabets: &Alphabets,
    window: &[Step],
    depth: usize,
    max_leaves: u64,
    weight: &mut F,
) -> Result<(Vec<f64>, u64)>
where
    F: FnMut(&[bool], &[bool]) -> Result<f64>,
{
    if depth == 0 {
        return Err(Error::Argument("lookahead depth must be at least 1".into()));
    }
    let branching = (alphabets.actions * alphabets.percepts()) as u64;
    let leaves = (0..depth).try_fold(1u64, |acc, _| acc.checked_mul(branching));
    match leaves {
        Some(l) if l <= max_leaves => {}
        _ => {
            return Err(Error::Resource(format!(
                "expectimax tree of ({branching})^{depth} leaves exceeds {max_leaves}"
            )))
        }
    }
    let mut path = window.to_vec();
    let mut calls = 0u64;
    let mut values = Vec::with_capacity(alphabets.actions);
    for a in 0..alphabets.actions {
        values.push(after_action(
            alphabets, &mut path, a, depth, 0, weight, &mut calls,
        )?);
    }
    Ok((values, calls))
}

fn after_action<F>(
    al: &Alphabets,
    path: &mut Vec<Step>,
    action: usize,
    remaining: usize,
    rewards: u32,
    weight: &mut F,
    calls: &mut u64,
) -> Result<f64>
where
    F: FnMut(&[bool], &[bool]) -> Result<f64>,
{
    let mut total = 0.0;
    for j in 0..al.percepts() {
        let (observation, reward) = al.percept(j);
        path.push(Step {
            action,
            observation,
            reward,
        });
        let got = rewards + u32::from(reward);
        let v = if remaining == 1 {
            let (x, y) = encode_steps(al, path);
            *calls += 1;
            got as f64 * weight(&x, &y)?
        } else {
            let mut best = f64::NEG_INFINITY;
            for a in 0..al.actions {
                best = best.max(after_action(
                    al,
                    path,
                    a,
                    remaining - 1,
                    got,
                    weight,
                    calls,
                )?);
            }
            best
        };
        path.pop();
        total += v;
    }
    Ok(total)
}

fn window_of(history: &[Step], window: usize) -> &[Step] {
    &history[history.len().saturating_sub(window)..]
}

/// AIXI-Spd: expectimax weighted by the exact fixed-length prior of the
/// percepts conditioned on the actions.
pub fn aixi_spd_action(
    prior: &SpeedPrior,
    history: &[Step],
    alphabets: &Alphabets,
    depth: usize,
    window: usize,
) -> Result<ActionDecision> {
    let mut rng = crate::rng::seeded(0);
    let mut w =
        |x: &[bool], y: &[bool]| Ok(prior.quasi(x, y, PriorMethod::Classical, &mut rng)?.value);
    let (values, prior_calls) = expectimax(
        alphabets,
        window_of(history, window),
        depth,
        DEFAULT_MAX_LEAVES,
        &mut w,
    )?;
    Ok(ActionDecision {
        action: argmax(&values),
        values,
        prior_calls,
        method: PriorMethod::Classical,
        epsilon_used: None,
        k_used: None,
        depth,
        window,
    })
}

/// AIXIq: expectimax weighted by sampled quasi-conditional estimates.
///
/// Without an override the per-call `ε` follows `1/(n·m·2^{|O||A|(m−k)})`
/// and `k` defaults to 100.
#[allow(clippy::too_many_arguments)]
pub fn aixiq_action<R: Rng + ?Sized>(
    prior: &SpeedPrior,
    history: &[Step],
    alphabets: &Alphabets,
    depth: usize,
    window: usize,
    epsilon_override: Option<f64>,
    k_confidence: Option<f64>,
    rng: &mut R,
) -> Result<ActionDecision> {
    let now = history.len() + 1;
    let horizon = now + depth - 1;
    let epsilon = epsilon_override.unwrap_or_else(|| {
        horizon_epsilon(
            alphabets.width,
            horizon,
            depth - 1,
            alphabets.observations,
            alphabets.actions,
        )
    });
    let k = k_confidence.unwrap_or(DEFAULT_CONFIDENCE_K);
    let mut w = |x: &[bool], y: &[bool]| Ok(prior.quasi_sampled(x, y, epsilon, k, rng)?.value);
    let (values, prior_calls) = expectimax(
        alphabets,
        window_of(history, window),
        depth,
        DEFAULT_MAX_LEAVES,
        &mut w,
    )?;
    Ok(ActionDecision {
        action: argmax(&values),
        values,
        prior_calls,
        method: PriorMethod::DjSampling,
        epsilon_used: Some(epsilon),
        k_used: Some(k),
        depth,
        window,
    })
}
