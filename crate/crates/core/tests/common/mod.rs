//! Shared test fixtures: a second machine with non-trivial priors and
//! brute-force oracles written without the library's table builders.

#![allow(dead_code)]

use qsp_core::agent::Step;
use qsp_core::machine::{Machine, RunOutcome, RunStatus};

/// Emits `p` cyclically (complemented for some programs), one bit every
/// `d(p) ∈ {1, 2, 3}` steps, and halts after `2ℓ(p)` bits.
#[derive(Clone, Copy, Debug, Default)]
pub struct HashMachine;

fn fnv(bits: &[bool]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bits {
        h ^= u64::from(b) + 2;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h ^= bits.len() as u64;
    h.wrapping_mul(0x0100_0000_01b3)
}

impl Machine for HashMachine {
    fn id(&self) -> String {
        "hash".into()
    }

    fn run(&self, program: &[bool], budget: u64, output_cap: Option<usize>) -> RunOutcome {
        let h = fnv(program);
        let delay = 1 + h % 3;
        let flip = (h >> 7) & 1 == 1;
        let total = 2 * program.len();
        let cap = output_cap.unwrap_or(usize::MAX);
        let mut output = Vec::new();
        let mut steps = 0;
        loop {
            if output.len() >= cap {
                return RunOutcome {
                    status: RunStatus::OutputCapped,
                    output,
                    steps,
                };
            }
            if output.len() >= total {
                return RunOutcome {
                    status: RunStatus::Halted,
                    output,
                    steps,
                };
            }
            if steps + delay > budget {
                return RunOutcome {
                    status: RunStatus::BudgetExhausted,
                    output,
                    steps: budget,
                };
            }
            steps += delay;
            output.push(program[output.len() % program.len()] ^ flip);
        }
    }
}

pub fn bits(s: &str) -> Vec<bool> {
    s.chars().map(|c| c == '1').collect()
}

/// All bitstrings of length `n`, lexicographic.
pub fn strings(n: usize) -> Vec<Vec<bool>> {
    (0..1usize << n)
        .map(|v| (0..n).map(|j| (v >> (n - 1 - j)) & 1 == 1).collect())
        .collect()
}

fn budget(len: usize, phase: usize) -> u64 {
    if len > phase {
        0
    } else {
        2f64.powi((phase - len) as i32).min(u64::MAX as f64 / 2.0) as u64
    }
}

fn emits(machine: &dyn Machine, program: &[bool], steps: u64, want: &[bool]) -> bool {
    machine
        .run(program, steps, Some(want.len()))
        .output
        .starts_with(want)
}

/// Literal `p‖y →_i y‖x`.
pub fn arrives(machine: &dyn Machine, p: &[bool], y: &[bool], x: &[bool], phase: usize) -> bool {
    let want: Vec<bool> = y.iter().chain(x).copied().collect();
    let with_y = |q: &[bool]| -> Vec<bool> { q.iter().chain(y).copied().collect() };
    if !emits(machine, &with_y(p), budget(p.len(), phase), &want) {
        return false;
    }
    (1..p.len()).all(|l| !emits(machine, &with_y(&p[..l]), budget(l, phase), &want))
}

/// `Σ_{i=1}^{n²} 2^{-i} Σ_{ℓ(p)=n, p‖y →_i y‖x} 2^{-n}` by direct double loop.
pub fn brute_prior(machine: &dyn Machine, x: &[bool], y: &[bool]) -> f64 {
    let n = x.len();
    if n == 0 {
        return 1.0;
    }
    let programs = strings(n);
    let mut total = 0.0;
    for i in 1..=n * n {
        let hits = programs
            .iter()
            .filter(|p| arrives(machine, p, y, x, i))
            .count();
        total += 2f64.powi(-(i as i32)) * hits as f64 * 2f64.powi(-(n as i32));
    }
    total
}

/// One invocation of every subcommand, with fixed seeds.
pub fn cli_cases() -> Vec<Vec<String>> {
    let dir = std::env::temp_dir().join(format!("qsp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("oracle.txt");
    std::fs::write(&table, "00 0\n01 1\n10 1\n11 0\n").unwrap();
    let tm = dir.join("add.tm");
    std::fs::write(&tm, qsp_core::machine::add_machine().serialize()).unwrap();
    let (table, tm) = (table.display().to_string(), tm.display().to_string());
    let cases: Vec<Vec<&str>> = vec![
        vec!["dj", "--oracle", "constant0", "--n", "3"],
        vec!["dj", "--oracle-table", &table],
        vec![
            "dj-estimate",
            "--oracle",
            "marked=101",
            "--epsilon",
            "0.1",
            "--k",
            "2",
        ],
        vec!["grover", "--oracle", "marked=0110"],
        vec!["grover", "--oracle", "marked=011", "--strict-paper-mode"],
        vec!["count", "--oracle", "marked=001,010,111", "--m", "3"],
        vec!["phase", "--omega", "0.3125", "--m", "4"],
        vec!["qft", "0110"],
        vec!["shor", "15"],
        vec!["shor", "21"],
        vec!["machine", "run", "0001011", "--budget", "20"],
        vec!["--machine", &tm, "machine", "run", "1", "--budget", "50"],
        vec!["kolmogorov", "0101", "--max-len", "8"],
        vec!["prior", "classical", "101"],
        vec!["prior", "qcount", "1111", "--precision", "3"],
        vec!["prior", "dj", "1111", "--epsilon", "0.1"],
        vec!["prior", "conditional", "11", "1111"],
        vec!["prior", "quasi", "1", "01"],
        vec!["prior", "quasi", "11", "1", "--method", "qcount"],
        vec!["laplace", "--ones", "3", "--total", "10"],
        vec!["agent", "act", "--history", "101"],
        vec![
            "agent",
            "act",
            "--agent",
            "aixiq",
            "--epsilon",
            "0.1",
            "--k",
            "2",
        ],
        vec!["agent", "episode", "--length", "6"],
        vec![
            "agent", "episode", "--env", "coin:0.5", "--agent", "random", "--length", "30",
        ],
        vec!["agent", "episode", "--agent", "laplace", "--length", "10"],
    ];
    cases
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(String::from)
                .chain(["--seed".to_string(), "7".to_string()])
                .collect()
        })
        .collect()
}

/// Parses stdout records and drops the timing field.
pub fn records(stdout: &str) -> Vec<serde_json::Value> {
    stdout
        .lines()
        .map(|l| {
            let mut v: serde_json::Value = serde_json::from_str(l).expect("every line is JSON");
            if let Some(m) = v.as_object_mut() {
                m.remove("timing");
            }
            v
        })
        .collect()
}

/// Percept and action strings written out by hand: observation bit, reward
/// bit; action as `0a`.
pub fn strings_of(steps: &[Step]) -> (Vec<bool>, Vec<bool>) {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for s in steps {
        x.extend([s.observation == 1, s.reward]);
        y.extend([false, s.action == 1]);
    }
    (x, y)
}

/// Two-step expectimax written out as explicit loops over every (a, o, r) sequence.
pub struct ExpectimaxOracle<'m> {
    machine: &'m dyn Machine,
    memo: std::collections::HashMap<(Vec<bool>, Vec<bool>), f64>,
}

impl<'m> ExpectimaxOracle<'m> {
    pub fn new(machine: &'m dyn Machine) -> Self {
        ExpectimaxOracle {
            machine,
            memo: Default::default(),
        }
    }

    fn weight(&mut self, steps: &[Step]) -> f64 {
        let (x, y) = strings_of(steps);
        let m = self.machine;
        *self
            .memo
            .entry((x.clone(), y.clone()))
            .or_insert_with(|| brute_prior(m, &x, &y))
    }

    pub fn values(&mut self, window: &[Step], depth: usize) -> Vec<f64> {
        let percepts = [(0, false), (0, true), (1, false), (1, true)];
        let mut values = vec![0.0; 2];
        for (a1, value) in values.iter_mut().enumerate() {
            for &(o1, r1) in &percepts {
                let s1 = Step {
                    action: a1,
                    observation: o1,
                    reward: r1,
                };
                if depth == 1 {
                    let mut path = window.to_vec();
                    path.push(s1);
                    *value += f64::from(u8::from(r1)) * self.weight(&path);
                    continue;
                }
                let mut best = f64::NEG_INFINITY;
                for a2 in 0..2 {
                    let mut sum = 0.0;
                    for &(o2, r2) in &percepts {
                        let mut path = window.to_vec();
                        path.push(s1);
                        path.push(Step {
                            action: a2,
                            observation: o2,
                            reward: r2,
                        });
                        sum += f64::from(u8::from(r1) + u8::from(r2)) * self.weight(&path);
                    }
                    best = best.max(sum);
                }
                *value += best;
            }
        }
        values
    }
}

pub fn first_max(v: &[f64]) -> usize {
    if v[1] > v[0] {
        1
    } else {
        0
    }
}
