//! The `qsp` command-line driver.
//!
//! Every invocation emits JSON records, one per line, on stdout and a short
//! human-readable summary on stderr unless `--json` is given.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::agent::{
    aixi_spd_action, aixiq_action, run_episode, AgentConfig, AgentKind, Alphabets, EnvironmentSpec,
    Step,
};
use crate::error::{Error, Result};
use crate::machine::{
    format_bits, kolmogorov_bounded, parse_bits, Machine, Program, Sk2, TmMachine, TmSpec,
};
use crate::prior::{laplace_fraction, PriorMethod, PriorParams, SpeedPrior};
use crate::qalg::{
    deutsch_jozsa, estimate_fraction, grover_search, phase_estimate, qft, quantum_count,
    shor_factor, GroverOptions, OrderFinder, ShorOptions,
};
use crate::qsim::{set_max_qubits, Matrix, Oracle, StateVector};
use crate::rng::{stream, SimRng};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_RETRY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "qsp",
    version,
    about = "Quantum simulation and speed-prior estimation"
)]
pub struct Cli {
    /// Base seed; falls back to QSP_SEED, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Emit JSON records only.
    #[arg(long, global = true)]
    json: bool,
    /// Literal readings: ceiling Grover count, empty-string branches, fraction weighting.
    #[arg(long, global = true)]
    strict_paper_mode: bool,
    #[arg(long, global = true)]
    max_qubits: Option<usize>,
    /// `sk2` or a Turing-machine description file.
    #[arg(long, global = true, default_value = "sk2")]
    machine: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Deutsch-Jozsa constant/balanced decision.
    Dj(OracleArgs),
    /// Estimate the fraction of ones of f with the modified Deutsch-Jozsa circuit.
    DjEstimate {
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 3.0)]
        k: f64,
    },
    /// Grover search for a marked input.
    Grover {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Number of solutions (defaults to the true count).
        #[arg(long)]
        solutions: Option<usize>,
    },
    /// Quantum counting of the marked inputs.
    Count {
        #[command(flatten)]
        oracle: OracleArgs,
        /// Precision bits.
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Phase estimation of diag(1, e^{2πiω}) on |1⟩.
    Phase {
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Quantum Fourier transform of a basis state.
    Qft {
        /// Basis state as a bitstring, qubit 0 first.
        input: String,
    },
    /// Factor an integer.
    Shor {
        n: u64,
        #[arg(long, default_value_t = crate::qalg::DEFAULT_SHOR_EPSILON)]
        epsilon: f64,
        /// Qubit cap for the order-finding circuit.
        #[arg(long, default_value_t = crate::qalg::DEFAULT_MAX_SHOR_QUBITS)]
        order_qubits: usize,
    },
    #[command(subcommand)]
    Machine(MachineCommand),
    /// Shortest program printing exactly x within a phase budget.
    Kolmogorov {
        x: String,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 12)]
        phase: usize,
    },
    #[command(subcommand)]
    Prior(PriorCommand),
    /// Rule of succession.
    Laplace {
        #[arg(long)]
        ones: u64,
        #[arg(long)]
        total: u64,
    },
    #[command(subcommand)]
    Agent(AgentCommand),
}

#[derive(Subcommand, Debug)]
enum MachineCommand {
    /// Run one program under a step budget.
    Run {
        /// A bit string, or a file holding one.
        program: String,
        #[arg(long, default_value_t = 1024)]
        budget: u64,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
struct PriorOpts {
    #[arg(long, default_value_t = crate::prior::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = crate::prior::DEFAULT_K)]
    k: f64,
    /// Precision bits for quantum counting.
    #[arg(long, default_value_t = crate::prior::DEFAULT_PRECISION)]
    precision: usize,
    /// Longest string enumerated.
    #[arg(long, default_value_t = crate::prior::DEFAULT_CLASSICAL_CAP)]
    cap: usize,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum MethodArg {
    Classical,
    Qcount,
    Dj,
}

impl From<MethodArg> for PriorMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Classical => PriorMethod::Classical,
            MethodArg::Qcount => PriorMethod::Qcount,
            MethodArg::Dj => PriorMethod::DjSampling,
        }
    }
}

#[derive(Subcommand, Debug)]
enum PriorCommand {
    /// Exact enumeration.
    Classical {
        x: String,
        #[command(flatten)]
        opts: PriorOpts,
    },
    /// Quantum-counting estimate.
    Qcount {
        x: String,
        #[command(flatten)]
        opts: PriorOpts,
    },
    /// Sampling estimate.
    Dj {
        x: String,
        #[command(flatten)]
        opts: PriorOpts,
    },
    /// S(y | x) as a ratio of two priors.
    Conditional {
        y: String,
        x: String,
        #[arg(long, value_enum, default_value = "classical")]
        method: MethodArg,
        #[command(flatten)]
        opts: PriorOpts,
    },
    /// Quasi-conditional prior S'(x, y).
    Quasi {
        x: String,
        y: String,
        #[arg(long, value_enum, default_value = "dj")]
        method: MethodArg,
        #[command(flatten)]
        opts: PriorOpts,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum AgentArg {
    AixiSpd,
    Aixiq,
    Laplace,
    Random,
}

impl From<AgentArg> for AgentKind {
    fn from(a: AgentArg) -> Self {
        match a {
            AgentArg::AixiSpd => AgentKind::AixiSpd,
            AgentArg::Aixiq => AgentKind::Aixiq,
            AgentArg::Laplace => AgentKind::LaplaceBaseline,
            AgentArg::Random => AgentKind::Random,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct AgentOpts {
    /// Lookahead m − k + 1.
    #[arg(long, default_value_t = crate::agent::DEFAULT_DEPTH)]
    depth: usize,
    #[arg(long, default_value_t = crate::agent::DEFAULT_WINDOW)]
    window: usize,
    /// Per-call accuracy for AIXIq (default: the horizon formula).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Confidence parameter for AIXIq (default 100).
    #[arg(long)]
    k: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum AgentCommand {
    /// Choose the next action for a history of `aor` triples, e.g. `101,010`.
    Act {
        #[arg(long, default_value = "")]
        history: String,
        #[arg(long, value_enum, default_value = "aixi-spd")]
        agent: AgentArg,
        #[command(flatten)]
        opts: AgentOpts,
    },
    /// Run an episode in `pattern:<bits>` or `coin:<p>`.
    Episode {
        #[arg(long, default_value = "pattern:01")]
        env: String,
        #[arg(long, value_enum, default_value = "aixi-spd")]
        agent: AgentArg,
        #[arg(long, default_value_t = 20)]
        length: usize,
        #[command(flatten)]
        opts: AgentOpts,
    },
}

#[derive(Args, Debug, Clone)]
struct OracleArgs {
    /// `constant0`, `constant1`, `balanced-bit0` or `marked=<bits>[,<bits>…]`.
    #[arg(long, conflicts_with = "oracle_table")]
    oracle: Option<String>,
    /// File of `input output` lines.
    #[arg(long)]
    oracle_table: Option<String>,
    /// Input width for the built-in oracles.
    #[arg(long)]
    n: Option<usize>,
}

impl OracleArgs {
    fn build(&self) -> Result<Oracle> {
        if let Some(path) = &self.oracle_table {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Argument(format!("{path}: {e}")))?;
            return Oracle::parse_table(&text);
        }
        let spec = self.oracle.as_deref().ok_or_else(|| {
            Error::Argument("one of --oracle or --oracle-table is required".into())
        })?;
        if let Some(list) = spec.strip_prefix("marked=") {
            let marks: Vec<&str> = list.split(',').filter(|s| !s.is_empty()).collect();
            let width = self
                .n
                .or_else(|| marks.first().map(|m| m.len()))
                .unwrap_or(0);
            let mut idx = Vec::with_capacity(marks.len());
            for m in marks {
                if m.len() != width {
                    return Err(Error::Argument(format!(
                        "marked input {m:?} is not {width} bits"
                    )));
                }
                idx.push(crate::machine::value_of(&parse_bits(m)?));
            }
            return Oracle::marked(width, &idx);
        }
        let n = self
            .n
            .ok_or_else(|| Error::Argument(format!("--n is required for oracle {spec}")))?;
        match spec {
            "constant0" => Oracle::constant(n, false),
            "constant1" => Oracle::constant(n, true),
            "balanced-bit0" => Oracle::balanced_first_bit(n),
            other => Err(Error::Argument(format!("unknown oracle {other:?}"))),
        }
    }

    fn describe(&self) -> Value {
        json!({ "oracle": self.oracle, "oracle_table": self.oracle_table, "n": self.n })
    }
}

/// Result payload plus the fields promoted to the top of the record.
struct Outcome {
    params: Value,
    result: Value,
    error_bound: Option<f64>,
    confidence: Option<f64>,
    /// Extra records emitted before the summary (episode steps).
    lines: Vec<Value>,
}

impl Outcome {
    fn new(params: Value, result: impl serde::Serialize) -> Result<Self> {
        Ok(Outcome {
            params,
            result: to_value(result)?,
            error_bound: None,
            confidence: None,
            lines: Vec::new(),
        })
    }

    fn bounds(mut self, error_bound: Option<f64>, confidence: Option<f64>) -> Self {
        self.error_bound = error_bound;
        self.confidence = confidence;
        self
    }
}

fn to_value(v: impl serde::Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Parse(e.to_string()))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Failure(_) => EXIT_RETRY,
        _ => EXIT_INVALID,
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Dj(_) => "dj",
        Command::DjEstimate { .. } => "dj-estimate",
        Command::Grover { .. } => "grover",
        Command::Count { .. } => "count",
        Command::Phase { .. } => "phase",
        Command::Qft { .. } => "qft",
        Command::Shor { .. } => "shor",
        Command::Machine(_) => "machine run",
        Command::Kolmogorov { .. } => "kolmogorov",
        Command::Prior(p) => match p {
            PriorCommand::Classical { .. } => "prior classical",
            PriorCommand::Qcount { .. } => "prior qcount",
            PriorCommand::Dj { .. } => "prior dj",
            PriorCommand::Conditional { .. } => "prior conditional",
            PriorCommand::Quasi { .. } => "prior quasi",
        },
        Command::Laplace { .. } => "laplace",
        Command::Agent(AgentCommand::Act { .. }) => "agent act",
        Command::Agent(AgentCommand::Episode { .. }) => "agent episode",
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_INVALID,
            };
        }
    };
    let seed = match cli.seed {
        Some(s) => s,
        None => match std::env::var("QSP_SEED") {
            Ok(v) => match v.trim().parse() {
                Ok(s) => s,
                Err(_) => {
                    let _ = writeln!(err, "error: QSP_SEED={v:?} is not an unsigned integer");
                    return EXIT_INVALID;
                }
            },
            Err(_) => 0,
        },
    };
    let name = command_name(&cli.command);
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0);
    let clock = Instant::now();
    let outcome = execute(&cli, seed);
    let elapsed = clock.elapsed().as_secs_f64();
    match outcome {
        Ok(o) => {
            for line in &o.lines {
                let _ = writeln!(out, "{line}");
            }
            let mut record = Map::new();
            record.insert("command".into(), json!(name));
            record.insert("params".into(), o.params);
            record.insert("seed".into(), json!(seed));
            record.insert("result".into(), o.result);
            if let Some(b) = o.error_bound {
                record.insert("error_bound".into(), json!(b));
            }
            if let Some(c) = o.confidence {
                record.insert("confidence".into(), json!(c));
            }
            record.insert(
                "timing".into(),
                json!({ "started_unix_ms": started, "elapsed_s": elapsed }),
            );
            let record = Value::Object(record);
            let _ = writeln!(out, "{record}");
            if !cli.json {
                human(err, name, &record);
            }
            EXIT_OK
        }
        Err(e) => {
            let record = json!({ "command": name, "seed": seed, "error": e.to_string() });
            let _ = writeln!(out, "{record}");
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn human(err: &mut dyn Write, name: &str, record: &Value) {
    let _ = writeln!(err, "{name} (seed {})", record["seed"]);
    if let Value::Object(m) = &record["result"] {
        for (k, v) in m {
            let text = match v {
                Value::Array(a) if a.len() > 16 => format!("[{} entries]", a.len()),
                Value::Object(_) => "{…}".to_string(),
                other => other.to_string(),
            };
            let _ = writeln!(err, "  {k:<22} {text}");
        }
    } else {
        let _ = writeln!(err, "  {}", record["result"]);
    }
    for key in ["error_bound", "confidence"] {
        if let Some(v) = record.get(key) {
            let _ = writeln!(err, "  {key:<22} {v}");
        }
    }
}

fn load_program(arg: &str) -> Result<Program> {
    if arg.chars().all(|c| c == '0' || c == '1') {
        return Program::parse(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::Argument(format!("{arg}: {e}")))?;
    Program::parse(&text)
}

fn load_machine(spec: &str) -> Result<Box<dyn Machine>> {
    if spec == "sk2" {
        return Ok(Box::new(Sk2));
    }
    let text =
        std::fs::read_to_string(spec).map_err(|e| Error::Argument(format!("{spec}: {e}")))?;
    let tm = TmSpec::parse(&text)?;
    let name = std::path::Path::new(spec)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| spec.to_string());
    Ok(Box::new(TmMachine::new(tm, name)))
}

fn prior_params(opts: &PriorOpts, strict: bool) -> PriorParams {
    PriorParams {
        epsilon: opts.epsilon,
        k: opts.k,
        precision: opts.precision,
        cap: opts.cap,
        strict_paper: strict,
    }
}

fn execute(cli: &Cli, seed: u64) -> Result<Outcome> {
    if let Some(q) = cli.max_qubits {
        set_max_qubits(q)?;
    }
    let mut rng: SimRng = stream(seed, 0);
    let strict = cli.strict_paper_mode;
    match &cli.command {
        Command::Dj(o) => {
            let r = deutsch_jozsa(&o.build()?)?;
            Outcome::new(o.describe(), r)
        }
        Command::DjEstimate { oracle, epsilon, k } => {
            let r = estimate_fraction(&oracle.build()?, *epsilon, *k, &mut rng)?;
            let (b, c) = (r.fraction_bound, r.confidence);
            let mut params = oracle.describe();
            params["epsilon"] = json!(epsilon);
            params["k"] = json!(k);
            Ok(Outcome::new(params, r)?.bounds(Some(b), Some(c)))
        }
        Command::Grover { oracle, solutions } => {
            let f = oracle.build()?;
            let m = solutions.unwrap_or_else(|| f.count_marked());
            let opts = GroverOptions {
                strict_paper: strict,
                retry_cap: None,
            };
            let r = grover_search(&f, m, &opts, &mut rng)?;
            let mut params = oracle.describe();
            params["solutions"] = json!(m);
            params["strict_paper"] = json!(strict);
            Outcome::new(params, r)
        }
        Command::Count { oracle, m, epsilon } => {
            let r = quantum_count(&oracle.build()?, *m, *epsilon, &mut rng)?;
            let (b, c) = (r.error_bound, r.confidence);
            let mut params = oracle.describe();
            params["m"] = json!(m);
            params["epsilon"] = json!(epsilon);
            Ok(Outcome::new(params, r)?.bounds(Some(b), Some(c)))
        }
        Command::Phase { omega, m, epsilon } => {
            if !(0.0..1.0).contains(omega) {
                return Err(Error::Argument(format!("omega {omega} outside [0, 1)")));
            }
            let u = Matrix::diagonal(&[
                Complex64::new(1.0, 0.0),
                Complex64::from_polar(1.0, 2.0 * PI * omega),
            ]);
            let r = phase_estimate(&u, &StateVector::basis(1, 1)?, *m, *epsilon, &mut rng)?;
            let c = r.confidence;
            let b = 0.5f64.powi(*m as i32);
            let params = json!({ "omega": omega, "m": m, "epsilon": epsilon });
            Ok(Outcome::new(params, r)?.bounds(Some(b), Some(c)))
        }
        Command::Qft { input } => {
            let bits = parse_bits(input)?;
            if bits.is_empty() {
                return Err(Error::Argument("empty input".into()));
            }
            let n = bits.len();
            let state = StateVector::basis(n, crate::machine::value_of(&bits))?;
            let qubits: Vec<usize> = (0..n).collect();
            let out = qft(state, &qubits)?;
            let amps: Vec<[f64; 2]> = out.amplitudes().iter().map(|a| [a.re, a.im]).collect();
            let probs = out.probabilities(&qubits)?;
            Outcome::new(
                json!({ "input": input }),
                json!({ "amplitudes": amps, "probabilities": probs }),
            )
        }
        Command::Shor {
            n,
            epsilon,
            order_qubits,
        } => {
            let opts = ShorOptions {
                epsilon: *epsilon,
                max_qubits: *order_qubits,
                ..ShorOptions::default()
            };
            let r = shor_factor(*n, &OrderFinder::new(), &opts, &mut rng)?;
            Outcome::new(
                json!({ "n": n, "epsilon": epsilon, "order_qubits": order_qubits }),
                r,
            )
        }
        Command::Machine(MachineCommand::Run {
            program,
            budget,
            cap,
        }) => {
            let machine = load_machine(&cli.machine)?;
            let p = load_program(program)?;
            let r = machine.run(p.bits(), *budget, *cap);
            let params = json!({ "machine": machine.id(), "program": program, "budget": budget, "cap": cap });
            Outcome::new(params, r)
        }
        Command::Kolmogorov { x, max_len, phase } => {
            let machine = load_machine(&cli.machine)?;
            let bits = parse_bits(x)?;
            let k = kolmogorov_bounded(machine.as_ref(), &bits, *max_len, *phase)?;
            let params =
                json!({ "machine": machine.id(), "x": x, "max_len": max_len, "phase": phase });
            Outcome::new(params, json!({ "length": k }))
        }
        Command::Prior(p) => prior_command(cli, p, strict, &mut rng),
        Command::Laplace { ones, total } => {
            let (num, den) = laplace_fraction(*ones, *total)?;
            let result = json!({ "numerator": num, "denominator": den, "probability": num as f64 / den as f64 });
            Outcome::new(json!({ "ones": ones, "total": total }), result)
        }
        Command::Agent(a) => agent_command(cli, a, seed, &mut rng),
    }
}

fn prior_command(cli: &Cli, p: &PriorCommand, strict: bool, rng: &mut SimRng) -> Result<Outcome> {
    let machine = load_machine(&cli.machine)?;
    let (opts, params) = match p {
        PriorCommand::Classical { x, opts }
        | PriorCommand::Qcount { x, opts }
        | PriorCommand::Dj { x, opts } => (opts, json!({ "x": x })),
        PriorCommand::Conditional { y, x, method, opts } => (
            opts,
            json!({ "y": y, "x": x, "method": format!("{method:?}").to_lowercase() }),
        ),
        PriorCommand::Quasi { x, y, method, opts } => (
            opts,
            json!({ "x": x, "y": y, "method": format!("{method:?}").to_lowercase() }),
        ),
    };
    let mut params = params;
    params["machine"] = json!(machine.id());
    params["epsilon"] = json!(opts.epsilon);
    params["k"] = json!(opts.k);
    params["precision"] = json!(opts.precision);
    params["cap"] = json!(opts.cap);
    params["strict_paper"] = json!(strict);
    let prior = SpeedPrior::new(machine.as_ref(), prior_params(opts, strict));
    let est = match p {
        PriorCommand::Classical { x, .. } => prior.classical(&parse_bits(x)?)?,
        PriorCommand::Qcount { x, .. } => prior.qcount(&parse_bits(x)?, rng)?,
        PriorCommand::Dj { x, .. } => prior.dj(&parse_bits(x)?, rng)?,
        PriorCommand::Conditional { y, x, method, .. } => {
            let c = prior.conditional(&parse_bits(y)?, &parse_bits(x)?, (*method).into(), rng)?;
            let (b, conf) = (
                c.error_bound,
                c.numerator.confidence.min(c.denominator.confidence),
            );
            return Ok(Outcome::new(params, c)?.bounds(Some(b), Some(conf)));
        }
        PriorCommand::Quasi { x, y, method, .. } => {
            prior.quasi(&parse_bits(x)?, &parse_bits(y)?, (*method).into(), rng)?
        }
    };
    let (b, c) = (est.error_bound, est.confidence);
    Ok(Outcome::new(params, est)?.bounds(Some(b), Some(c)))
}

/// Parses comma-separated `aor` digit triples over binary alphabets.
fn parse_history(text: &str) -> Result<Vec<Step>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|t| {
            let bits = parse_bits(t)?;
            if bits.len() != 3 {
                return Err(Error::Parse(format!(
                    "history entry {t:?} is not an `aor` triple"
                )));
            }
            Ok(Step {
                action: usize::from(bits[0]),
                observation: usize::from(bits[1]),
                reward: bits[2],
            })
        })
        .collect()
}

fn parse_env(text: &str) -> Result<EnvironmentSpec> {
    if let Some(pattern) = text.strip_prefix("pattern:") {
        let bits = parse_bits(pattern)?;
        return EnvironmentSpec::pattern(bits.into_iter().map(usize::from).collect());
    }
    if let Some(p) = text.strip_prefix("coin:") {
        let p: f64 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad coin bias {p:?}")))?;
        return EnvironmentSpec::biased_coin(p);
    }
    Err(Error::Argument(format!(
        "unknown environment {text:?}; use pattern:<bits> or coin:<p>"
    )))
}

fn agent_config(opts: &AgentOpts, strict: bool) -> AgentConfig {
    AgentConfig {
        depth: opts.depth,
        window: opts.window,
        epsilon_override: opts.epsilon,
        k_confidence: opts.k,
        prior: PriorParams {
            strict_paper: strict,
            ..PriorParams::default()
        },
    }
}

fn agent_command(cli: &Cli, a: &AgentCommand, seed: u64, rng: &mut SimRng) -> Result<Outcome> {
    let machine = load_machine(&cli.machine)?;
    let strict = cli.strict_paper_mode;
    match a {
        AgentCommand::Act {
            history,
            agent,
            opts,
        } => {
            let steps = parse_history(history)?;
            let config = agent_config(opts, strict);
            let prior = SpeedPrior::new(machine.as_ref(), config.prior.clone());
            let al = Alphabets::binary();
            let params = json!({
                "machine": machine.id(), "history": history, "agent": format!("{agent:?}").to_lowercase(),
                "depth": opts.depth, "window": opts.window, "epsilon": opts.epsilon, "k": opts.k,
            });
            let decision = match AgentKind::from(*agent) {
                AgentKind::AixiSpd => {
                    aixi_spd_action(&prior, &steps, &al, opts.depth, opts.window)?
                }
                AgentKind::Aixiq => aixiq_action(
                    &prior,
                    &steps,
                    &al,
                    opts.depth,
                    opts.window,
                    opts.epsilon,
                    opts.k,
                    rng,
                )?,
                other => {
                    return Err(Error::Argument(format!(
                        "{other:?} has no single-step decision; use `agent episode`"
                    )))
                }
            };
            Outcome::new(params, decision)
        }
        AgentCommand::Episode {
            env,
            agent,
            length,
            opts,
        } => {
            let spec = parse_env(env)?;
            let config = agent_config(opts, strict);
            let ep = run_episode(
                machine.as_ref(),
                &spec,
                (*agent).into(),
                *length,
                seed,
                &config,
            )?;
            let params = json!({
                "machine": machine.id(), "env": env, "agent": format!("{agent:?}").to_lowercase(),
                "length": length, "depth": opts.depth, "window": opts.window, "epsilon": opts.epsilon, "k": opts.k,
            });
            let lines = ep.steps.iter().map(to_value).collect::<Result<Vec<_>>>()?;
            let actions: String =
                format_bits(&ep.steps.iter().map(|s| s.action == 1).collect::<Vec<_>>());
            let result = json!({
                "agent": ep.agent, "cumulative_reward": ep.cumulative_reward, "steps": ep.steps.len(), "actions": actions,
            });
            let mut o = Outcome::new(params, result)?;
            o.lines = lines;
            Ok(o)
        }
    }
}
