use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::sk2::{Machine, RunOutcome, RunStatus};
use crate::error::{Error, Result};

pub const BLANK: char = '#';
/// Upper bound on TM steps per run; larger budgets are clamped.
pub const TM_STEP_CEILING: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Move {
    L,
    R,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub write: char,
    pub next: String,
    pub movement: Move,
}

/// A deterministic Turing machine `(Σ, Q, δ)` with start and final states.
///
/// A missing `δ` entry halts the machine with a reject.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmSpec {
    pub alphabet: Vec<char>,
    pub states: Vec<String>,
    pub start: String,
    pub accept: String,
    pub delta: BTreeMap<(String, char), Transition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MachineConfig {
    pub tape: BTreeMap<i64, char>,
    pub head: i64,
    pub state: String,
    pub steps_used: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TmStatus {
    Accepted,
    Rejected,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TmRun {
    pub status: TmStatus,
    pub config: MachineConfig,
}

impl MachineConfig {
    /// Input written from cell 0 rightwards, head on cell 0, in the start state.
    pub fn initial(spec: &TmSpec, input: &str) -> Self {
        let tape = input
            .chars()
            .enumerate()
            .filter(|&(_, c)| c != BLANK)
            .map(|(i, c)| (i as i64, c))
            .collect();
        MachineConfig {
            tape,
            head: 0,
            state: spec.start.clone(),
            steps_used: 0,
        }
    }

    pub fn read(&self) -> char {
        self.tape.get(&self.head).copied().unwrap_or(BLANK)
    }

    /// Tape contents between the outermost non-blank cells.
    pub fn tape_string(&self) -> String {
        match (self.tape.keys().next(), self.tape.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo..=hi)
                .map(|i| self.tape.get(&i).copied().unwrap_or(BLANK))
                .collect(),
            _ => String::new(),
        }
    }
}

impl TmSpec {
    pub fn new(
        alphabet: Vec<char>,
        states: Vec<String>,
        start: &str,
        accept: &str,
        transitions: Vec<(&str, char, char, &str, Move)>,
    ) -> Result<Self> {
        let mut delta = BTreeMap::new();
        for (q, s, w, n, m) in transitions {
            let key = (q.to_string(), s);
            let t = Transition {
                write: w,
                next: n.to_string(),
                movement: m,
            };
            if delta.insert(key, t).is_some() {
                return Err(Error::Validation(format!(
                    "duplicate transition for ({q}, {s})"
                )));
            }
        }
        let spec = TmSpec {
            alphabet,
            states,
            start: start.to_string(),
            accept: accept.to_string(),
            delta,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if !self.alphabet.contains(&BLANK) {
            return Err(Error::Validation(
                "alphabet must contain the blank '#'".into(),
            ));
        }
        for q in [&self.start, &self.accept] {
            if !self.states.contains(q) {
                return Err(Error::Validation(format!("unknown state {q}")));
            }
        }
        if self.start == self.accept {
            return Err(Error::Validation(
                "final state must differ from the start state".into(),
            ));
        }
        for ((q, s), t) in &self.delta {
            if q == &self.accept {
                return Err(Error::Validation(format!(
                    "transition out of final state {q}"
                )));
            }
            if !self.states.contains(q) || !self.states.contains(&t.next) {
                return Err(Error::Validation(format!(
                    "transition ({q}, {s}) uses an unknown state"
                )));
            }
            if !self.alphabet.contains(s) || !self.alphabet.contains(&t.write) {
                return Err(Error::Validation(format!(
                    "transition ({q}, {s}) uses an unknown symbol"
                )));
            }
        }
        Ok(())
    }

    /// Parses the line format produced by [`TmSpec::serialize`].
    pub fn parse(text: &str) -> Result<Self> {
        let mut alphabet = None;
        let mut states = None;
        let mut start = None;
        let mut accept = None;
        let mut delta = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if let Some((key, rest)) = line.split_once(':') {
                let words: Vec<&str> = rest.split_whitespace().collect();
                match key.trim() {
                    "alphabet" => {
                        let syms: Result<Vec<char>> = words
                            .iter()
                            .map(|w| {
                                single_char(w).ok_or_else(|| err("symbols are single characters"))
                            })
                            .collect();
                        alphabet = Some(syms?);
                    }
                    "states" => {
                        states = Some(words.iter().map(|w| w.to_string()).collect::<Vec<_>>())
                    }
                    "start" if words.len() == 1 => start = Some(words[0].to_string()),
                    "final" if words.len() == 1 => accept = Some(words[0].to_string()),
                    _ => return Err(err("unknown header")),
                }
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() != 6 || words[2] != "->" {
                return Err(err("expected `state symbol -> symbol state L|R`"));
            }
            let read = single_char(words[1]).ok_or_else(|| err("bad read symbol"))?;
            let write = single_char(words[3]).ok_or_else(|| err("bad write symbol"))?;
            let movement = match words[5] {
                "L" => Move::L,
                "R" => Move::R,
                _ => return Err(err("direction must be L or R")),
            };
            let t = Transition {
                write,
                next: words[4].to_string(),
                movement,
            };
            if delta.insert((words[0].to_string(), read), t).is_some() {
                return Err(err("duplicate transition"));
            }
        }
        let missing = |what: &str| Error::Parse(format!("missing `{what}:` line"));
        let spec = TmSpec {
            alphabet: alphabet.ok_or_else(|| missing("alphabet"))?,
            states: states.ok_or_else(|| missing("states"))?,
            start: start.ok_or_else(|| missing("start"))?,
            accept: accept.ok_or_else(|| missing("final"))?,
            delta,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Canonical text form: headers, then transitions ordered by state and symbol declaration order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let syms: Vec<String> = self.alphabet.iter().map(char::to_string).collect();
        let _ = writeln!(out, "alphabet: {}", syms.join(" "));
        let _ = writeln!(out, "states: {}", self.states.join(" "));
        let _ = writeln!(out, "start: {}", self.start);
        let _ = writeln!(out, "final: {}", self.accept);
        for q in &self.states {
            for &s in &self.alphabet {
                if let Some(t) = self.delta.get(&(q.clone(), s)) {
                    let _ = writeln!(out, "{q} {s} -> {} {} {:?}", t.write, t.next, t.movement);
                }
            }
        }
        out
    }
}

fn single_char(word: &str) -> Option<char> {
    let mut it = word.chars();
    match (it.next(), it.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// Applies one transition; `Ok(None)` when `δ` has no entry (reject).
pub fn tm_step(spec: &TmSpec, config: &MachineConfig) -> Result<Option<MachineConfig>> {
    if config.state == spec.accept {
        return Err(Error::Argument(
            "machine is already in its final state".into(),
        ));
    }
    let mut next = config.clone();
    Ok(advance(spec, &mut next).then_some(next))
}

fn advance(spec: &TmSpec, config: &mut MachineConfig) -> bool {
    let Some(t) = spec.delta.get(&(config.state.clone(), config.read())) else {
        return false;
    };
    if t.write == BLANK {
        config.tape.remove(&config.head);
    } else {
        config.tape.insert(config.head, t.write);
    }
    config.head += match t.movement {
        Move::L => -1,
        Move::R => 1,
    };
    config.state.clone_from(&t.next);
    config.steps_used += 1;
    true
}

/// Runs from `config` until acceptance, rejection or `budget` steps.
pub fn tm_run(spec: &TmSpec, mut config: MachineConfig, budget: u64) -> TmRun {
    loop {
        if config.state == spec.accept {
            return TmRun {
                status: TmStatus::Accepted,
                config,
            };
        }
        if config.steps_used >= budget {
            return TmRun {
                status: TmStatus::BudgetExhausted,
                config,
            };
        }
        if !advance(spec, &mut config) {
            return TmRun {
                status: TmStatus::Rejected,
                config,
            };
        }
    }
}

/// Unary addition `1^l # 1^m ↦ 1^{l+m}`.
pub fn add_machine() -> TmSpec {
    TmSpec::new(
        vec![BLANK, '1'],
        ["q0", "q1", "q2", "qf"].map(String::from).to_vec(),
        "q0",
        "qf",
        vec![
            ("q0", '1', '1', "q0", Move::R),
            ("q0", BLANK, '1', "q1", Move::R),
            ("q1", '1', '1', "q1", Move::R),
            ("q1", BLANK, BLANK, "q2", Move::L),
            ("q2", '1', BLANK, "qf", Move::R),
        ],
    )
    .expect("fixture is well formed")
}

/// Writes 1 and moves right forever.
pub fn runaway_machine() -> TmSpec {
    TmSpec::new(
        vec![BLANK, '1'],
        ["q0", "qf"].map(String::from).to_vec(),
        "q0",
        "qf",
        vec![
            ("q0", BLANK, '1', "q0", Move::R),
            ("q0", '1', '1', "q0", Move::R),
        ],
    )
    .expect("fixture is well formed")
}

/// Steps right then left forever over two cells.
pub fn oscillator_machine() -> TmSpec {
    TmSpec::new(
        vec![BLANK, '1'],
        ["q0", "q1", "qf"].map(String::from).to_vec(),
        "q0",
        "qf",
        vec![
            ("q0", BLANK, '1', "q1", Move::R),
            ("q1", BLANK, '1', "q0", Move::L),
            ("q0", '1', '1', "q1", Move::R),
            ("q1", '1', '1', "q0", Move::L),
        ],
    )
    .expect("fixture is well formed")
}

/// Exposes a [`TmSpec`] through [`Machine`]: the program bits are the input
/// tape and the output is the tape's leading run of `0`/`1` cells on acceptance.
#[derive(Clone, Debug)]
pub struct TmMachine {
    pub spec: TmSpec,
    pub name: String,
}

impl TmMachine {
    pub fn new(spec: TmSpec, name: impl Into<String>) -> Self {
        TmMachine {
            spec,
            name: name.into(),
        }
    }
}

impl Machine for TmMachine {
    fn id(&self) -> String {
        format!("tm:{}", self.name)
    }

    fn run(&self, program: &[bool], budget: u64, output_cap: Option<usize>) -> RunOutcome {
        let input: String = program.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let run = tm_run(
            &self.spec,
            MachineConfig::initial(&self.spec, &input),
            budget.min(TM_STEP_CEILING),
        );
        let steps = run.config.steps_used;
        let status = match run.status {
            TmStatus::BudgetExhausted => {
                let steps = if budget > TM_STEP_CEILING {
                    budget
                } else {
                    steps
                };
                return RunOutcome {
                    status: RunStatus::BudgetExhausted,
                    output: Vec::new(),
                    steps,
                };
            }
            TmStatus::Rejected => {
                return RunOutcome {
                    status: RunStatus::Halted,
                    output: Vec::new(),
                    steps,
                }
            }
            TmStatus::Accepted => RunStatus::Halted,
        };
        let mut output: Vec<bool> = run
            .config
            .tape_string()
            .chars()
            .map_while(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect();
        if let Some(cap) = output_cap {
            if output.len() >= cap {
                output.truncate(cap);
                return RunOutcome {
                    status: RunStatus::OutputCapped,
                    output,
                    steps,
                };
            }
        }
        RunOutcome {
            status,
            output,
            steps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_one_plus_one() {
        let spec = add_machine();
        let run = tm_run(&spec, MachineConfig::initial(&spec, "1#1"), 100);
        assert_eq!(run.status, TmStatus::Accepted);
        assert_eq!(run.config.steps_used, 5);
        assert_eq!(run.config.tape_string(), "11");
    }

    #[test]
    fn add_takes_n_plus_two_steps() {
        let spec = add_machine();
        for l in 1..5 {
            for m in 1..5 {
                let input = format!("{}#{}", "1".repeat(l), "1".repeat(m));
                let run = tm_run(&spec, MachineConfig::initial(&spec, &input), 1000);
                assert_eq!(run.config.steps_used as usize, l + m + 1 + 2);
                assert_eq!(run.config.tape_string(), "1".repeat(l + m));
            }
        }
    }

    #[test]
    fn add_trace() {
        let spec = add_machine();
        let mut c = MachineConfig::initial(&spec, "1#1");
        let mut trace = vec![(c.state.clone(), c.head)];
        while c.state != spec.accept {
            c = tm_step(&spec, &c).unwrap().unwrap();
            trace.push((c.state.clone(), c.head));
        }
        let expect = [
            ("q0", 0),
            ("q0", 1),
            ("q1", 2),
            ("q1", 3),
            ("q2", 2),
            ("qf", 3),
        ];
        let got: Vec<(&str, i64)> = trace.iter().map(|(s, h)| (s.as_str(), *h)).collect();
        assert_eq!(got, expect);
        assert!(tm_step(&spec, &c).is_err());
    }

    #[test]
    fn non_halting_fixtures() {
        for budget in [0, 1, 10, 1000] {
            let spec = runaway_machine();
            let run = tm_run(&spec, MachineConfig::initial(&spec, ""), budget);
            assert_eq!(run.status, TmStatus::BudgetExhausted);
            assert_eq!(run.config.tape.len() as u64, budget);

            let spec = oscillator_machine();
            let run = tm_run(&spec, MachineConfig::initial(&spec, ""), budget);
            assert_eq!(run.status, TmStatus::BudgetExhausted);
            assert!(run.config.tape.len() <= 2);
            assert!(run.config.tape.keys().all(|&k| k == 0 || k == 1));
        }
    }

    #[test]
    fn missing_entry_rejects() {
        let spec = add_machine();
        let run = tm_run(&spec, MachineConfig::initial(&spec, "#"), 100);
        // q0 on # writes 1, q1 on # turns to q2, q2 reads 1 and accepts
        assert_eq!(run.status, TmStatus::Accepted);
        let spec = TmSpec::new(
            vec![BLANK, '1'],
            vec!["a".into(), "f".into()],
            "a",
            "f",
            vec![],
        )
        .unwrap();
        assert_eq!(
            tm_run(&spec, MachineConfig::initial(&spec, ""), 10).status,
            TmStatus::Rejected
        );
    }

    #[test]
    fn round_trip() {
        for spec in [add_machine(), runaway_machine(), oscillator_machine()] {
            let text = spec.serialize();
            let back = TmSpec::parse(&text).unwrap();
            assert_eq!(back, spec);
            assert_eq!(back.serialize(), text);
        }
        let text = add_machine().serialize();
        assert!(text.contains("q0 1 -> 1 q0 R\n"));
        assert!(text.starts_with("alphabet: # 1\nstates: q0 q1 q2 qf\nstart: q0\nfinal: qf\n"));
    }

    #[test]
    fn parse_errors() {
        assert!(TmSpec::parse("states: a f\nstart: a\nfinal: f\n").is_err());
        assert!(TmSpec::parse("alphabet: # 1\nstates: a f\nstart: a\nfinal: a\n").is_err());
        assert!(
            TmSpec::parse("alphabet: # 1\nstates: a f\nstart: a\nfinal: f\na 1 -> 1 a X\n")
                .is_err()
        );
        assert!(
            TmSpec::parse("alphabet: # 1\nstates: a f\nstart: a\nfinal: f\na 1 -> 1 b R\n")
                .is_err()
        );
    }

    #[test]
    fn adapter_reports_output_only_on_acceptance() {
        let m = TmMachine::new(add_machine(), "add");
        // program 1 is input "1": q0 R, q0 # → 1, q1 # → q2 L, q2 1 → # accept: tape "1"
        let o = m.run_bounded(&[true], 100);
        assert_eq!(
            (o.status, o.output.clone(), o.steps),
            (RunStatus::Halted, vec![true], 4)
        );
        let o = m.run_bounded(&[true], 3);
        assert_eq!((o.status, o.output.len()), (RunStatus::BudgetExhausted, 0));
        let r = TmMachine::new(runaway_machine(), "runaway").run_bounded(&[], u64::MAX);
        assert_eq!((r.status, r.steps), (RunStatus::BudgetExhausted, u64::MAX));
    }
}
