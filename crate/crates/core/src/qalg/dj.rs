use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qsim::{GateSpec, Oracle, StateVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DjVerdict {
    Constant,
    Balanced,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DjResult {
    pub verdict: DjVerdict,
    /// Probability of reading all zeros on the input register.
    pub zero_probability: f64,
    pub oracle_calls: usize,
}

/// Prepares `H^{⊗n}·U_f·H^{⊗(n+1)} |0…0⟩|1⟩` and returns the exact probability
/// of the all-zeros input outcome, `((N − 2L)/N)²`.
pub fn dj_zero_probability(oracle: &Oracle) -> Result<f64> {
    let n = oracle.arity();
    let mut state = StateVector::basis(n + 1, 1)?;
    for q in 0..=n {
        state.apply_gate(&GateSpec::h(q))?;
    }
    let inputs: Vec<usize> = (0..n).collect();
    state.apply_oracle(oracle, &inputs, n)?;
    for &q in &inputs {
        state.apply_gate(&GateSpec::h(q))?;
    }
    state.check_norm()?;
    Ok(state.probabilities(&inputs)?[0])
}

/// Classifies a promised constant-or-balanced oracle with one query.
pub fn deutsch_jozsa(oracle: &Oracle) -> Result<DjResult> {
    let p = dj_zero_probability(oracle)?;
    let verdict = if p > 0.5 {
        DjVerdict::Constant
    } else {
        DjVerdict::Balanced
    };
    Ok(DjResult {
        verdict,
        zero_probability: p,
        oracle_calls: 1,
    })
}

/// One run of the modified circuit: `true` iff the input register reads all zeros.
pub fn modified_dj_trial<R: Rng + ?Sized>(oracle: &Oracle, rng: &mut R) -> Result<bool> {
    let n = oracle.arity();
    let mut state = StateVector::basis(n + 1, 1)?;
    for q in 0..=n {
        state.apply_gate(&GateSpec::h(q))?;
    }
    let inputs: Vec<usize> = (0..n).collect();
    state.apply_oracle(oracle, &inputs, n)?;
    for &q in &inputs {
        state.apply_gate(&GateSpec::h(q))?;
    }
    Ok(state.measure(&inputs, rng)?.value == 0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FractionEstimate {
    /// Estimate of `L / 2^n`, on the `L ≤ N/2` branch.
    pub fraction: f64,
    pub trials: usize,
    pub epsilon: f64,
    pub k: f64,
    /// Mean of the trial bits; estimates `((N − 2L)/N)²`.
    pub mean: f64,
    /// Hoeffding bound on `mean`; holds with probability `confidence`.
    pub mean_bound: f64,
    /// `mean_bound` pushed through `x ↦ (1 − √x)/2`.
    pub fraction_bound: f64,
    pub confidence: f64,
}

/// Number of trials `⌈k/ε²⌉`.
pub fn trials_for(epsilon: f64, k: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Argument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if !(k >= 1.0) {
        return Err(Error::Argument(format!("k must be at least 1, got {k}")));
    }
    let m = (k / (epsilon * epsilon)).ceil();
    if m > 1e9 {
        return Err(Error::Resource(format!("{m} trials requested")));
    }
    Ok(m as usize)
}

fn recover(x: f64) -> f64 {
    ((1.0 - x.clamp(0.0, 1.0).sqrt()) / 2.0).clamp(0.0, 0.5)
}

/// Estimates the marked fraction from `⌈k/ε²⌉` modified-DJ trials.
///
/// The circuit is prepared once. Trials are independent runs of it, so the
/// number of all-zeros outcomes is drawn directly from `Binomial(m, p)`.
pub fn estimate_fraction<R: Rng + ?Sized>(
    oracle: &Oracle,
    epsilon: f64,
    k: f64,
    rng: &mut R,
) -> Result<FractionEstimate> {
    let trials = trials_for(epsilon, k)?;
    let p = dj_zero_probability(oracle)?;
    let ones = Binomial::new(trials as u64, p.clamp(0.0, 1.0))
        .map_err(|e| Error::Validation(format!("trial distribution: {e}")))?
        .sample(rng);
    Ok(fraction_from_mean(
        ones as f64 / trials as f64,
        trials,
        epsilon,
        k,
    ))
}

/// Builds the estimate record for an observed mean.
pub fn fraction_from_mean(mean: f64, trials: usize, epsilon: f64, k: f64) -> FractionEstimate {
    let fraction = recover(mean);
    let lo = recover(mean + epsilon);
    let hi = recover(mean - epsilon);
    FractionEstimate {
        fraction,
        trials,
        epsilon,
        k,
        mean,
        mean_bound: epsilon,
        fraction_bound: (fraction - lo).max(hi - fraction),
        confidence: 1.0 - 2.0 * (-2.0 * k).exp(),
    }
}
