use serde::Serialize;

use super::program::serialize_bits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RunStatus {
    Halted,
    BudgetExhausted,
    /// Stopped early because the output reached the requested length.
    OutputCapped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunOutcome {
    pub status: RunStatus,
    #[serde(serialize_with = "serialize_bits")]
    pub output: Vec<bool>,
    pub steps: u64,
}

/// A deterministic machine that reads a binary program and emits bits.
///
/// Emitted output must only grow with more steps.
pub trait Machine: Send + Sync {
    fn id(&self) -> String;

    /// Runs for at most `budget` steps, stopping early once `output_cap` bits are out.
    fn run(&self, program: &[bool], budget: u64, output_cap: Option<usize>) -> RunOutcome;

    fn run_bounded(&self, program: &[bool], budget: u64) -> RunOutcome {
        self.run(program, budget, None)
    }
}

/// Two-bit-opcode reference machine.
///
/// `00` emits 0, `01` emits 1, `10` re-emits the last bit (0 if none yet),
/// `11` jumps back to the first opcode. Every opcode costs one step, running
/// off the end halts, and a trailing odd bit is ignored.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sk2;

impl Machine for Sk2 {
    fn id(&self) -> String {
        "sk2".into()
    }

    fn run(&self, program: &[bool], budget: u64, output_cap: Option<usize>) -> RunOutcome {
        let ops = program.len() / 2;
        let cap = output_cap.unwrap_or(usize::MAX);
        let mut output = Vec::new();
        let mut pc = 0;
        let mut steps = 0u64;
        loop {
            if output.len() >= cap {
                return RunOutcome {
                    status: RunStatus::OutputCapped,
                    output,
                    steps,
                };
            }
            if pc >= ops {
                return RunOutcome {
                    status: RunStatus::Halted,
                    output,
                    steps,
                };
            }
            if steps >= budget {
                return RunOutcome {
                    status: RunStatus::BudgetExhausted,
                    output,
                    steps,
                };
            }
            steps += 1;
            match (program[2 * pc], program[2 * pc + 1]) {
                (false, b) => {
                    output.push(b);
                    pc += 1;
                }
                (true, false) => {
                    output.push(output.last().copied().unwrap_or(false));
                    pc += 1;
                }
                (true, true) => {
                    if pc == 0 {
                        // a LOOP in first position spins without emitting
                        return RunOutcome {
                            status: RunStatus::BudgetExhausted,
                            output,
                            steps: budget,
                        };
                    }
                    pc = 0;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::program::{format_bits, parse_bits};

    fn run(p: &str, budget: u64) -> (RunStatus, String, u64) {
        let o = Sk2.run_bounded(&parse_bits(p).unwrap(), budget);
        (o.status, format_bits(&o.output), o.steps)
    }

    #[test]
    fn examples() {
        assert_eq!(run("01", 1), (RunStatus::Halted, "1".into(), 1));
        assert_eq!(run("", 0), (RunStatus::Halted, "".into(), 0));
        for b in [0, 1, 7, 1000] {
            assert_eq!(run("11", b).0, RunStatus::BudgetExhausted);
            assert_eq!(run("1101", b).0, RunStatus::BudgetExhausted);
        }
    }

    #[test]
    fn opcodes() {
        assert_eq!(run("0010", 5), (RunStatus::Halted, "00".into(), 2));
        assert_eq!(run("0110", 5), (RunStatus::Halted, "11".into(), 2));
        assert_eq!(run("10", 5), (RunStatus::Halted, "0".into(), 1));
        assert_eq!(run("011", 5), (RunStatus::Halted, "1".into(), 1));
        // 01 11 emits 1, loops: 1 bit per two steps
        assert_eq!(
            run("0111", 7),
            (RunStatus::BudgetExhausted, "1111".into(), 7)
        );
        assert_eq!(run("0001", 1), (RunStatus::BudgetExhausted, "0".into(), 1));
    }

    #[test]
    fn output_cap_stops_early() {
        let o = Sk2.run(&parse_bits("0111").unwrap(), u64::MAX, Some(3));
        assert_eq!(
            (o.status, format_bits(&o.output), o.steps),
            (RunStatus::OutputCapped, "111".into(), 5)
        );
        let o = Sk2.run(&parse_bits("11").unwrap(), u64::MAX, Some(1));
        assert_eq!((o.status, o.steps), (RunStatus::BudgetExhausted, u64::MAX));
    }
}
