//! Program semantics: the reference machine, a Turing-machine interpreter and the FAST schedule.

mod fast;
mod program;
mod sk2;
mod tm;

pub use fast::{
    emit_time, fast_phase, kolmogorov_bounded, outputs_within, outputs_within_context,
    phase_budget, PhaseEntry, KOLMOGOROV_MAX_LEN,
};
pub use program::{bits_of, format_bits, parse_bits, value_of, Program};
pub use sk2::{Machine, RunOutcome, RunStatus, Sk2};
pub use tm::{
    add_machine, oscillator_machine, runaway_machine, tm_run, tm_step, MachineConfig, Move,
    TmMachine, TmRun, TmSpec, TmStatus, Transition, BLANK, TM_STEP_CEILING,
};
