use serde::Serialize;

use super::program::Program;
use super::sk2::{Machine, RunOutcome, RunStatus};
use crate::error::{Error, Result};

pub const KOLMOGOROV_MAX_LEN: usize = 20;

/// Phase-`i` step budget `⌊2^{i−len}⌋` for a program of length `len`.
pub fn phase_budget(len: usize, phase: usize) -> u64 {
    if len > phase {
        0
    } else {
        1u64.checked_shl((phase - len) as u32).unwrap_or(u64::MAX)
    }
}

fn emits_prefix(machine: &dyn Machine, program: &[bool], budget: u64, target: &[bool]) -> bool {
    let out = machine.run(program, budget, Some(target.len()));
    out.output.starts_with(target)
}

/// `p →_i x`: within its phase-`i` budget `p` emits output beginning with `x`,
/// and no proper prefix of `p` (lengths `1..ℓ(p)`) does so within its own budget.
pub fn outputs_within(
    machine: &dyn Machine,
    program: &Program,
    phase: usize,
    target: &[bool],
) -> bool {
    outputs_within_context(machine, program, &[], phase, target)
}

/// The conditioned form of `outputs_within`: the program `p‖y` must emit `y‖x`
/// within `⌊2^{i−ℓ(p)}⌋` steps, and no `p'‖y` with `p'` a proper prefix of `p`
/// may do so within `⌊2^{i−ℓ(p')}⌋`. With `y` empty this is `outputs_within`.
pub fn outputs_within_context(
    machine: &dyn Machine,
    program: &Program,
    context: &[bool],
    phase: usize,
    target: &[bool],
) -> bool {
    let mut want = context.to_vec();
    want.extend_from_slice(target);
    let bits = program.bits();
    let hits = |len: usize| {
        let mut prog = bits[..len].to_vec();
        prog.extend_from_slice(context);
        emits_prefix(machine, &prog, phase_budget(len, phase), &want)
    };
    hits(bits.len()) && !(1..bits.len()).any(hits)
}

/// Fewest steps after which `program` has emitted output beginning with `target`,
/// or `None` if that never happens within `limit` steps.
pub fn emit_time(
    machine: &dyn Machine,
    program: &[bool],
    target: &[bool],
    limit: u64,
) -> Option<u64> {
    let out = machine.run(program, limit, Some(target.len()));
    if out.output.starts_with(target) {
        Some(out.steps)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseEntry {
    pub program: Program,
    pub budget: u64,
    pub outcome: RunOutcome,
}

/// Phase `i` of FAST: every program with `1 ≤ ℓ(p) ≤ min(i, max_len)`, shortest
/// first and lexicographic within a length, run for `⌊2^{i−ℓ(p)}⌋` steps.
pub fn fast_phase(machine: &dyn Machine, phase: usize, max_len: usize) -> Result<Vec<PhaseEntry>> {
    if phase == 0 {
        return Err(Error::Argument("phases start at 1".into()));
    }
    let top = phase.min(max_len);
    if top > KOLMOGOROV_MAX_LEN {
        return Err(Error::Resource(format!(
            "enumerating programs up to length {top}"
        )));
    }
    let mut entries = Vec::new();
    for len in 1..=top {
        let budget = phase_budget(len, phase);
        for program in Program::all_of_length(len) {
            let outcome = machine.run_bounded(program.bits(), budget);
            entries.push(PhaseEntry {
                program,
                budget,
                outcome,
            });
        }
    }
    Ok(entries)
}

/// Length of the shortest program of length `≤ max_len` that halts with output
/// exactly `x` within its phase-`i` budget.
pub fn kolmogorov_bounded(
    machine: &dyn Machine,
    x: &[bool],
    max_len: usize,
    phase: usize,
) -> Result<Option<usize>> {
    if max_len > KOLMOGOROV_MAX_LEN {
        return Err(Error::Resource(format!(
            "max_len {max_len} exceeds {KOLMOGOROV_MAX_LEN}"
        )));
    }
    for len in 0..=max_len {
        let budget = phase_budget(len, phase);
        for program in Program::all_of_length(len) {
            let out = machine.run(program.bits(), budget, Some(x.len() + 1));
            if out.status == RunStatus::Halted && out.output == x {
                return Ok(Some(len));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::program::parse_bits;
    use crate::machine::sk2::Sk2;

    fn p(s: &str) -> Program {
        Program::parse(s).unwrap()
    }

    fn b(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn budgets() {
        assert_eq!(phase_budget(3, 5), 4);
        assert_eq!(phase_budget(4, 3), 0);
        assert_eq!(phase_budget(0, 0), 1);
        assert_eq!(phase_budget(1, 200), u64::MAX);
    }

    #[test]
    fn zero_budget_never_outputs() {
        assert!(!outputs_within(&Sk2, &p("0101"), 3, &b("1")));
    }

    #[test]
    fn p0101_emits_11_from_phase_5() {
        // prefixes 0, 01, 010 emit at most "1" within any budget, so only the
        // budget of 0101 itself matters: ⌊2^{i−4}⌋ ≥ 2 ⇔ i ≥ 5
        for prefix in ["0", "01", "010"] {
            let out = Sk2.run_bounded(&b(prefix), u64::MAX);
            assert!(!out.output.starts_with(&b("11")));
        }
        for i in 1..=8 {
            assert_eq!(
                outputs_within(&Sk2, &p("0101"), i, &b("11")),
                i >= 5,
                "phase {i}"
            );
        }
    }

    #[test]
    fn minimality_excludes_extensions_of_emitting_prefixes() {
        // 01 already emits "1"; 0100 must not count for x = "1"
        assert!(outputs_within(&Sk2, &p("01"), 2, &b("1")));
        assert!(!outputs_within(&Sk2, &p("0100"), 6, &b("1")));
    }

    #[test]
    fn context_form_with_empty_context_matches() {
        for len in 1..=4 {
            for prog in Program::all_of_length(len) {
                for i in 1..=6 {
                    for x in ["1", "0", "11", "00"] {
                        assert_eq!(
                            outputs_within(&Sk2, &prog, i, &b(x)),
                            outputs_within_context(&Sk2, &prog, &[], i, &b(x))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn emit_time_examples() {
        assert_eq!(emit_time(&Sk2, &b("0111"), &b("1111"), u64::MAX), Some(7));
        assert_eq!(emit_time(&Sk2, &b("0111"), &b("1111"), 6), None);
        assert_eq!(emit_time(&Sk2, &b("0111"), &b("10"), u64::MAX), None);
        assert_eq!(emit_time(&Sk2, &b("11"), &b("1"), u64::MAX), None);
        assert_eq!(emit_time(&Sk2, &b("00"), &[], 0), Some(0));
    }

    #[test]
    fn phase_enumeration() {
        let one = fast_phase(&Sk2, 1, 5).unwrap();
        assert_eq!(one.len(), 2);
        assert!(one.iter().all(|e| e.budget == 1));
        let two = fast_phase(&Sk2, 2, 2).unwrap();
        assert_eq!(two.len(), 6);
        let names: Vec<String> = two.iter().map(|e| e.program.to_string()).collect();
        assert_eq!(names, ["0", "1", "00", "01", "10", "11"]);
        assert!(fast_phase(&Sk2, 0, 2).is_err());
    }

    #[test]
    fn kolmogorov_examples() {
        assert_eq!(kolmogorov_bounded(&Sk2, &[], 4, 1).unwrap(), Some(0));
        assert_eq!(kolmogorov_bounded(&Sk2, &b("1"), 4, 4).unwrap(), Some(2));
        // too little budget for any program to emit 1 and halt
        assert_eq!(kolmogorov_bounded(&Sk2, &b("1"), 4, 1).unwrap(), None);
        // an infinite stream never halts
        assert_eq!(kolmogorov_bounded(&Sk2, &b("111"), 4, 12).unwrap(), None);
        assert_eq!(kolmogorov_bounded(&Sk2, &b("111"), 6, 12).unwrap(), Some(6));
        assert!(kolmogorov_bounded(&Sk2, &b("1"), 21, 4).is_err());
    }
}
