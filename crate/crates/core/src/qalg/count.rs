use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::Serialize;

use super::grover::{grover_iterate, grover_start};
use super::phase::{counting_qubits, phase_distribution, UnitaryPowers};
use crate::error::{Error, Result};
use crate::qsim::{sample_index, Matrix, Oracle, StateVector};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountEstimate {
    pub m_hat: f64,
    /// Folded angle in `[0, π]`.
    pub theta_hat: f64,
    /// Bound on `|M̂ − M|` implied by `|θ̂ − θ| ≤ 2π·2^{−m}`.
    pub error_bound: f64,
    pub confidence: f64,
    pub domain_size: usize,
    pub precision_bits: usize,
    pub t_register: usize,
    pub outcome: usize,
    /// Whether `M̂` was clamped into `[0, N]`.
    pub clamped: bool,
}

/// Doubles the domain with a leading flag bit: `f'(b, x) = ¬b ∧ f(x)`.
///
/// This keeps `M ≤ N'/2`, so the two Grover eigenphases never alias.
pub fn extend_oracle(oracle: &Oracle) -> Result<Oracle> {
    let n = oracle.arity();
    Oracle::from_fn(n + 1, |bx| bx >> n == 0 && oracle.eval(bx))
}

/// Matrix of the Grover iterate on `arity + 1` qubits, built column by column.
pub fn grover_matrix(oracle: &Oracle) -> Result<Matrix> {
    let dim = 1usize << (oracle.arity() + 1);
    let mut g = Matrix::zeros(dim, dim);
    for c in 0..dim {
        let col = grover_iterate(StateVector::basis(oracle.arity() + 1, c)?, oracle)?;
        for (r, a) in col.amplitudes().iter().enumerate() {
            g.set(r, c, *a);
        }
    }
    Ok(g)
}

/// Counting-register distribution for `oracle` with a `t`-qubit register.
pub fn count_distribution(oracle: &Oracle, t: usize) -> Result<Vec<f64>> {
    let ext = extend_oracle(oracle)?;
    let g = grover_matrix(&ext)?;
    let powers = UnitaryPowers::by_squaring(&g, t)?;
    phase_distribution(&powers, &grover_start(ext.arity())?, t)
}

/// Turns a measured counting value into an estimate of `M`.
pub fn estimate_from_outcome(
    outcome: usize,
    t: usize,
    m: usize,
    domain: usize,
    epsilon: f64,
) -> CountEstimate {
    let phase = outcome as f64 / (1u64 << t) as f64;
    let theta_hat = 2.0 * PI * phase.min(1.0 - phase);
    let n = domain as f64;
    let raw = 2.0 * n * (theta_hat / 2.0).sin().powi(2);
    let m_hat = raw.clamp(0.0, n);
    let clamped = m_hat != raw;
    let delta = 2.0 * PI * 0.5f64.powi(m as i32);
    // M(θ) is monotone on [0, π], so the interval endpoints bound the deviation
    let at = |th: f64| (2.0 * n * (th.clamp(0.0, PI) / 2.0).sin().powi(2)).clamp(0.0, n);
    let error_bound = (m_hat - at(theta_hat - delta)).max(at(theta_hat + delta) - m_hat);
    CountEstimate {
        m_hat,
        theta_hat,
        error_bound,
        confidence: 1.0 - epsilon,
        domain_size: domain,
        precision_bits: m,
        t_register: t,
        outcome,
        clamped,
    }
}

/// Quantum counting with a per-(oracle, t) cache of the exact output distribution.
#[derive(Debug, Default)]
pub struct QuantumCounter {
    cache: Mutex<HashMap<(Oracle, usize), Arc<Vec<f64>>>>,
}

impl QuantumCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn distribution(&self, oracle: &Oracle, t: usize) -> Result<Arc<Vec<f64>>> {
        let key = (oracle.clone(), t);
        if let Some(d) = self.cache.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let d = Arc::new(count_distribution(oracle, t)?);
        self.cache.lock().unwrap().insert(key, d.clone());
        Ok(d)
    }

    pub fn count<R: Rng + ?Sized>(
        &self,
        oracle: &Oracle,
        m: usize,
        epsilon: f64,
        rng: &mut R,
    ) -> Result<CountEstimate> {
        let t = counting_qubits(m, epsilon)?;
        let dist = self.distribution(oracle, t)?;
        let j = sample_index(&dist, rng);
        Ok(estimate_from_outcome(
            j,
            t,
            m,
            oracle.domain_size(),
            epsilon,
        ))
    }

    /// Probability that the estimate lands within its own error bound of `truth`.
    pub fn coverage(&self, oracle: &Oracle, m: usize, epsilon: f64, truth: f64) -> Result<f64> {
        let t = counting_qubits(m, epsilon)?;
        let dist = self.distribution(oracle, t)?;
        Ok(dist
            .iter()
            .enumerate()
            .filter(|&(j, _)| {
                let e = estimate_from_outcome(j, t, m, oracle.domain_size(), epsilon);
                (e.m_hat - truth).abs() <= e.error_bound + 1e-9
            })
            .map(|(_, p)| p)
            .sum())
    }
}

/// Estimates the number of marked inputs.
pub fn quantum_count<R: Rng + ?Sized>(
    oracle: &Oracle,
    m: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<CountEstimate> {
    if m == 0 {
        return Err(Error::Argument("precision must be at least one bit".into()));
    }
    QuantumCounter::new().count(oracle, m, epsilon, rng)
}
