use std::f64::consts::PI;

use crate::error::Result;
use crate::qsim::{GateSpec, StateVector};

/// Gate sequence for the QFT on `qubits`, first listed qubit most significant.
pub fn qft_circuit(qubits: &[usize]) -> Result<Vec<GateSpec>> {
    let n = qubits.len();
    let mut gates = Vec::with_capacity(n * (n + 1) / 2 + n / 2);
    for j in 0..n {
        gates.push(GateSpec::h(qubits[j]));
        for k in j + 1..n {
            let angle = 2.0 * PI / (1u64 << (k - j + 1)) as f64;
            gates.push(GateSpec::controlled(
                GateSpec::phase(qubits[j], angle),
                &[qubits[k]],
            )?);
        }
    }
    for j in 0..n / 2 {
        gates.push(GateSpec::swap(qubits[j], qubits[n - 1 - j])?);
    }
    Ok(gates)
}

/// Gate sequence for the inverse QFT: the QFT circuit reversed with conjugated phases.
pub fn inverse_qft_circuit(qubits: &[usize]) -> Result<Vec<GateSpec>> {
    let n = qubits.len();
    let mut gates = Vec::new();
    for j in 0..n / 2 {
        gates.push(GateSpec::swap(qubits[j], qubits[n - 1 - j])?);
    }
    for j in (0..n).rev() {
        for k in (j + 1..n).rev() {
            let angle = -2.0 * PI / (1u64 << (k - j + 1)) as f64;
            gates.push(GateSpec::controlled(
                GateSpec::phase(qubits[j], angle),
                &[qubits[k]],
            )?);
        }
        gates.push(GateSpec::h(qubits[j]));
    }
    Ok(gates)
}

fn run(mut state: StateVector, gates: Vec<GateSpec>) -> Result<StateVector> {
    for g in &gates {
        state.apply_gate(g)?;
    }
    state.check_norm()?;
    Ok(state)
}

pub fn qft(state: StateVector, qubits: &[usize]) -> Result<StateVector> {
    let gates = qft_circuit(qubits)?;
    run(state, gates)
}

pub fn inverse_qft(state: StateVector, qubits: &[usize]) -> Result<StateVector> {
    let gates = inverse_qft_circuit(qubits)?;
    run(state, gates)
}
