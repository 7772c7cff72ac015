use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qsim::{bitstring, GateSpec, Oracle, StateVector};

pub const GROVER_RETRY_CAP: usize = 10;

/// One Grover rotation `H^{⊗n}(2|0⟩⟨0| − I)H^{⊗n}·U_f`.
///
/// Qubits `0..n` hold the search register and qubit `n` the ancilla, which the
/// caller prepares in `(|0⟩ − |1⟩)/√2`.
pub fn grover_iterate(mut state: StateVector, oracle: &Oracle) -> Result<StateVector> {
    let n = oracle.arity();
    if state.num_qubits() != n + 1 {
        return Err(Error::Argument(format!(
            "Grover state needs {} qubits, has {}",
            n + 1,
            state.num_qubits()
        )));
    }
    let inputs: Vec<usize> = (0..n).collect();
    state.apply_oracle(oracle, &inputs, n)?;
    for &q in &inputs {
        state.apply_gate(&GateSpec::h(q))?;
    }
    state.apply_gate(&GateSpec::phase_flip_about_zero(inputs.clone())?)?;
    for &q in &inputs {
        state.apply_gate(&GateSpec::h(q))?;
    }
    Ok(state)
}

/// `H^{⊗(n+1)}|0…0⟩|1⟩`: uniform search register, ancilla in `|−⟩`.
pub fn grover_start(n: usize) -> Result<StateVector> {
    let mut state = StateVector::basis(n + 1, 1)?;
    for q in 0..=n {
        state.apply_gate(&GateSpec::h(q))?;
    }
    Ok(state)
}

/// Rotation angle with `sin(θ/2) = √(M/N)`.
pub fn grover_angle(domain: usize, solutions: usize) -> f64 {
    2.0 * (solutions as f64 / domain as f64).sqrt().min(1.0).asin()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IterationCounts {
    /// `round(π/(2θ) − 1/2)`, the count that maximizes the success probability.
    pub derived: usize,
    /// `⌈(π/4)·√(N/M)⌉`.
    pub ceiling: usize,
}

pub fn iteration_counts(domain: usize, solutions: usize) -> Result<IterationCounts> {
    if solutions == 0 || solutions > domain {
        return Err(Error::Argument(format!(
            "need 1 ≤ M ≤ N, got M={solutions}, N={domain}"
        )));
    }
    let theta = grover_angle(domain, solutions);
    let derived = (PI / (2.0 * theta) - 0.5).round().max(0.0) as usize;
    let ceiling = (PI / 4.0 * (domain as f64 / solutions as f64).sqrt()).ceil() as usize;
    Ok(IterationCounts { derived, ceiling })
}

#[derive(Clone, Debug, Default)]
pub struct GroverOptions {
    /// Use the `⌈(π/4)√(N/M)⌉` count instead of the derived one.
    pub strict_paper: bool,
    pub retry_cap: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroverResult {
    pub x: usize,
    pub bits: String,
    pub iterations: usize,
    pub counts: IterationCounts,
    pub attempts: usize,
    /// Success probability of a single attempt.
    pub success_probability: f64,
}

/// Searches for a marked input given the true number of solutions.
pub fn grover_search<R: Rng + ?Sized>(
    oracle: &Oracle,
    m_solutions: usize,
    options: &GroverOptions,
    rng: &mut R,
) -> Result<GroverResult> {
    let n = oracle.arity();
    let counts = iteration_counts(oracle.domain_size(), m_solutions)?;
    let k = if options.strict_paper {
        counts.ceiling
    } else {
        counts.derived
    };
    let mut state = grover_start(n)?;
    for _ in 0..k {
        state = grover_iterate(state, oracle)?;
    }
    state.check_norm()?;
    let inputs: Vec<usize> = (0..n).collect();
    let probs = state.probabilities(&inputs)?;
    let success_probability: f64 = oracle.marked_inputs().iter().map(|&x| probs[x]).sum();

    let cap = options.retry_cap.unwrap_or(GROVER_RETRY_CAP);
    let mut log = Vec::new();
    for attempt in 1..=cap {
        let x = state.clone().measure(&inputs, rng)?.value;
        if oracle.eval(x) {
            return Ok(GroverResult {
                x,
                bits: bitstring(x, n),
                iterations: k,
                counts,
                attempts: attempt,
                success_probability,
            });
        }
        log.push(bitstring(x, n));
    }
    Err(Error::Failure(format!(
        "grover_search: {cap} attempts with k={k} found no marked input; measured {}",
        log.join(",")
    )))
}
