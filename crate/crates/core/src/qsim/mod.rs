//! Dense statevector simulation.

mod gate;
mod matrix;
mod oracle;
mod state;

pub use gate::{validate_unitary, GateKind, GateSpec, UNITARY_TOLERANCE};
pub use matrix::Matrix;
pub use oracle::Oracle;
pub use state::{
    bitstring, max_qubits, sample_index, set_max_qubits, MeasurementOutcome, StateVector,
    DEFAULT_MAX_QUBITS, NORM_TOLERANCE,
};
