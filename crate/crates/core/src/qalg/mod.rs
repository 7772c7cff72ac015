//! Quantum algorithms built as circuits over the simulator.

mod count;
mod dj;
mod grover;
mod phase;
mod qft;
mod shor;

pub use count::{
    count_distribution, estimate_from_outcome, extend_oracle, grover_matrix, quantum_count,
    CountEstimate, QuantumCounter,
};
pub use dj::{
    deutsch_jozsa, dj_zero_probability, estimate_fraction, fraction_from_mean, modified_dj_trial,
    trials_for, DjResult, DjVerdict, FractionEstimate,
};
pub use grover::{
    grover_angle, grover_iterate, grover_search, grover_start, iteration_counts, GroverOptions,
    GroverResult, IterationCounts, GROVER_RETRY_CAP,
};
pub use phase::{
    circular_distance, counting_qubits, eigenvalue, phase_distribution, phase_estimate,
    PhaseEstimate, UnitaryPowers, EIGEN_TOLERANCE,
};
pub use qft::{inverse_qft, inverse_qft_circuit, qft, qft_circuit};
pub use shor::{
    continued_fraction, gcd, is_prime, mod_pow, modmul_matrix, order_find, perfect_power,
    register_sizes, shor_factor, OrderFinder, OrderResult, ShorBranch, ShorOptions, ShorResult,
    DEFAULT_MAX_SHOR_QUBITS, DEFAULT_SHOR_EPSILON, ORDER_RETRY_CAP, SHOR_RESTART_CAP,
};
