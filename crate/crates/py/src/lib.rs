//! Python bindings. Results come back as plain dicts mirroring the CLI records.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use qsp_core::agent::{
    aixi_spd_action as core_aixi_spd, aixiq_action as core_aixiq, run_episode as core_run_episode,
    AgentConfig, AgentKind, Alphabets, EnvironmentSpec, Step,
};
use qsp_core::machine::{parse_bits, Machine, Sk2, TmMachine, TmSpec};
use qsp_core::prior::{PriorMethod, PriorParams, SpeedPrior};
use qsp_core::qalg;
use qsp_core::qsim::{self, GateSpec, Matrix};
use qsp_core::rng::{stream, SimRng};
use qsp_core::Error;

create_exception!(qspeed, ResourceError, PyRuntimeError);
create_exception!(qspeed, RetryError, PyRuntimeError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Resource(_) => ResourceError::new_err(e.to_string()),
        Error::Failure(_) => RetryError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for qsp_core::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// Serializes through JSON so results arrive as ordinary Python objects.
fn to_py(py: Python<'_>, value: impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(&value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn rng(seed: u64) -> SimRng {
    stream(seed, 0)
}

fn bits(text: &str) -> PyResult<Vec<bool>> {
    parse_bits(text).or_raise()
}

fn method(name: &str) -> PyResult<PriorMethod> {
    match name {
        "classical" => Ok(PriorMethod::Classical),
        "qcount" => Ok(PriorMethod::Qcount),
        "dj" => Ok(PriorMethod::DjSampling),
        other => Err(PyValueError::new_err(format!(
            "unknown method {other:?}; use classical, qcount or dj"
        ))),
    }
}

fn machine(spec: Option<&str>) -> PyResult<Box<dyn Machine>> {
    match spec {
        None | Some("sk2") => Ok(Box::new(Sk2)),
        Some(text) => Ok(Box::new(TmMachine::new(
            TmSpec::parse(text).or_raise()?,
            "custom",
        ))),
    }
}

/// Boolean function on `arity` input bits.
#[pyclass(name = "Oracle", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyOracle(qsim::Oracle);

#[pymethods]
impl PyOracle {
    #[new]
    fn new(arity: usize, table: Vec<bool>) -> PyResult<Self> {
        Ok(PyOracle(qsim::Oracle::new(arity, table).or_raise()?))
    }

    #[staticmethod]
    fn constant(arity: usize, value: bool) -> PyResult<Self> {
        Ok(PyOracle(qsim::Oracle::constant(arity, value).or_raise()?))
    }

    #[staticmethod]
    fn balanced(arity: usize) -> PyResult<Self> {
        Ok(PyOracle(
            qsim::Oracle::balanced_first_bit(arity).or_raise()?,
        ))
    }

    #[staticmethod]
    fn marked(arity: usize, inputs: Vec<usize>) -> PyResult<Self> {
        Ok(PyOracle(qsim::Oracle::marked(arity, &inputs).or_raise()?))
    }

    #[staticmethod]
    fn parse_table(text: &str) -> PyResult<Self> {
        Ok(PyOracle(qsim::Oracle::parse_table(text).or_raise()?))
    }

    #[getter]
    fn arity(&self) -> usize {
        self.0.arity()
    }

    #[getter]
    fn table(&self) -> Vec<bool> {
        self.0.table().to_vec()
    }

    fn count_marked(&self) -> usize {
        self.0.count_marked()
    }

    fn __call__(&self, x: usize) -> PyResult<bool> {
        if x >= self.0.domain_size() {
            return Err(PyValueError::new_err(format!("input {x} out of range")));
        }
        Ok(self.0.eval(x))
    }

    fn __repr__(&self) -> String {
        format!(
            "Oracle(arity={}, marked={})",
            self.0.arity(),
            self.0.count_marked()
        )
    }
}

/// Dense statevector; qubit 0 is the most significant bit of the basis index.
#[pyclass(name = "StateVector", skip_from_py_object)]
#[derive(Clone)]
struct PyState(qsim::StateVector);

impl PyState {
    fn gate(&mut self, g: qsp_core::Result<GateSpec>) -> PyResult<()> {
        self.0.apply_gate(&g.or_raise()?).or_raise()
    }
}

#[pymethods]
impl PyState {
    #[new]
    #[pyo3(signature = (num_qubits, index = 0))]
    fn new(num_qubits: usize, index: usize) -> PyResult<Self> {
        Ok(PyState(
            qsim::StateVector::basis(num_qubits, index).or_raise()?,
        ))
    }

    #[staticmethod]
    fn from_amplitudes(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        Ok(PyState(
            qsim::StateVector::from_amplitudes(amplitudes).or_raise()?,
        ))
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.0.amplitudes().to_vec()
    }

    fn probabilities(&self, qubits: Vec<usize>) -> PyResult<Vec<f64>> {
        self.0.probabilities(&qubits).or_raise()
    }

    fn h(&mut self, q: usize) -> PyResult<()> {
        self.gate(Ok(GateSpec::h(q)))
    }

    fn x(&mut self, q: usize) -> PyResult<()> {
        self.gate(Ok(GateSpec::x(q)))
    }

    fn pi8(&mut self, q: usize) -> PyResult<()> {
        self.gate(Ok(GateSpec::pi8(q)))
    }

    fn phase(&mut self, q: usize, angle: f64) -> PyResult<()> {
        self.gate(Ok(GateSpec::phase(q, angle)))
    }

    fn cnot(&mut self, control: usize, target: usize) -> PyResult<()> {
        self.gate(GateSpec::cnot(control, target))
    }

    fn swap(&mut self, a: usize, b: usize) -> PyResult<()> {
        self.gate(GateSpec::swap(a, b))
    }

    /// Applies a unitary given as a row-major list of rows to `targets`.
    fn unitary(&mut self, rows: Vec<Vec<Complex64>>, targets: Vec<usize>) -> PyResult<()> {
        let m = Matrix::from_rows(rows).or_raise()?;
        self.gate(GateSpec::explicit(m, targets))
    }

    fn apply_oracle(
        &mut self,
        oracle: &PyOracle,
        inputs: Vec<usize>,
        ancilla: usize,
    ) -> PyResult<()> {
        self.0.apply_oracle(&oracle.0, &inputs, ancilla).or_raise()
    }

    fn qft(&mut self, qubits: Vec<usize>) -> PyResult<()> {
        self.0 = qalg::qft(self.0.clone(), &qubits).or_raise()?;
        Ok(())
    }

    fn inverse_qft(&mut self, qubits: Vec<usize>) -> PyResult<()> {
        self.0 = qalg::inverse_qft(self.0.clone(), &qubits).or_raise()?;
        Ok(())
    }

    /// Samples `qubits` without disturbing this state; returns `(bits, probability)`.
    #[pyo3(signature = (qubits, seed = 0))]
    fn measure(&self, qubits: Vec<usize>, seed: u64) -> PyResult<(String, f64)> {
        let out = self.0.clone().measure(&qubits, &mut rng(seed)).or_raise()?;
        Ok((qsim::bitstring(out.value, qubits.len()), out.probability))
    }

    fn __repr__(&self) -> String {
        format!("StateVector(num_qubits={})", self.0.num_qubits())
    }
}

#[pyfunction]
fn set_max_qubits(cap: usize) -> PyResult<()> {
    qsim::set_max_qubits(cap).or_raise()
}

#[pyfunction]
fn deutsch_jozsa(py: Python<'_>, oracle: &PyOracle) -> PyResult<Py<PyAny>> {
    to_py(py, qalg::deutsch_jozsa(&oracle.0).or_raise()?)
}

#[pyfunction]
#[pyo3(signature = (oracle, epsilon = 0.05, k = 3.0, seed = 0))]
fn estimate_fraction(
    py: Python<'_>,
    oracle: &PyOracle,
    epsilon: f64,
    k: f64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    to_py(
        py,
        qalg::estimate_fraction(&oracle.0, epsilon, k, &mut rng(seed)).or_raise()?,
    )
}

#[pyfunction]
#[pyo3(signature = (oracle, solutions = None, strict_paper = false, seed = 0))]
fn grover_search(
    py: Python<'_>,
    oracle: &PyOracle,
    solutions: Option<usize>,
    strict_paper: bool,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let m = solutions.unwrap_or_else(|| oracle.0.count_marked());
    let opts = qalg::GroverOptions {
        strict_paper,
        retry_cap: None,
    };
    to_py(
        py,
        qalg::grover_search(&oracle.0, m, &opts, &mut rng(seed)).or_raise()?,
    )
}

#[pyfunction]
#[pyo3(signature = (oracle, m = 4, epsilon = 0.1, seed = 0))]
fn quantum_count(
    py: Python<'_>,
    oracle: &PyOracle,
    m: usize,
    epsilon: f64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    to_py(
        py,
        qalg::quantum_count(&oracle.0, m, epsilon, &mut rng(seed)).or_raise()?,
    )
}

/// Phase estimation of `u` on `eigenstate`.
#[pyfunction]
#[pyo3(signature = (u, eigenstate, m, epsilon = 0.1, seed = 0))]
fn phase_estimate(
    py: Python<'_>,
    u: Vec<Vec<Complex64>>,
    eigenstate: &PyState,
    m: usize,
    epsilon: f64,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let u = Matrix::from_rows(u).or_raise()?;
    to_py(
        py,
        qalg::phase_estimate(&u, &eigenstate.0, m, epsilon, &mut rng(seed)).or_raise()?,
    )
}

#[pyfunction]
#[pyo3(signature = (n, epsilon = qalg::DEFAULT_SHOR_EPSILON, seed = 0))]
fn shor_factor(py: Python<'_>, n: u64, epsilon: f64, seed: u64) -> PyResult<Py<PyAny>> {
    let opts = qalg::ShorOptions {
        epsilon,
        ..qalg::ShorOptions::default()
    };
    to_py(
        py,
        qalg::shor_factor(n, &qalg::OrderFinder::new(), &opts, &mut rng(seed)).or_raise()?,
    )
}

/// Runs `program` on SK-2, or on a Turing machine given as description text.
#[pyfunction]
#[pyo3(signature = (program, budget, output_cap = None, tm = None))]
fn run_machine(
    py: Python<'_>,
    program: &str,
    budget: u64,
    output_cap: Option<usize>,
    tm: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let m = machine(tm)?;
    to_py(py, m.run(&bits(program)?, budget, output_cap))
}

#[pyfunction]
#[pyo3(signature = (x, max_len = 8, phase = 12, tm = None))]
fn kolmogorov(x: &str, max_len: usize, phase: usize, tm: Option<&str>) -> PyResult<Option<usize>> {
    let m = machine(tm)?;
    qsp_core::machine::kolmogorov_bounded(m.as_ref(), &bits(x)?, max_len, phase).or_raise()
}

fn params(epsilon: f64, k: f64, precision: usize, strict_paper: bool) -> PriorParams {
    PriorParams {
        epsilon,
        k,
        precision,
        strict_paper,
        ..PriorParams::default()
    }
}

/// Fixed-length speed prior `S(x)`.
#[pyfunction]
#[pyo3(signature = (x, method = "classical", epsilon = 0.05, k = 3.0, precision = 6, strict_paper = false, seed = 0, tm = None))]
#[allow(clippy::too_many_arguments)]
fn speed_prior(
    py: Python<'_>,
    x: &str,
    method: &str,
    epsilon: f64,
    k: f64,
    precision: usize,
    strict_paper: bool,
    seed: u64,
    tm: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let m = machine(tm)?;
    let prior = SpeedPrior::new(m.as_ref(), params(epsilon, k, precision, strict_paper));
    let method = self::method(method)?;
    to_py(
        py,
        prior
            .estimate(&bits(x)?, method, &mut rng(seed))
            .or_raise()?,
    )
}

/// Quasi-conditional prior `S'(x, y)`.
#[pyfunction]
#[pyo3(signature = (x, y, method = "dj", epsilon = 0.05, k = 3.0, precision = 6, seed = 0, tm = None))]
#[allow(clippy::too_many_arguments)]
fn quasi_conditional(
    py: Python<'_>,
    x: &str,
    y: &str,
    method: &str,
    epsilon: f64,
    k: f64,
    precision: usize,
    seed: u64,
    tm: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let m = machine(tm)?;
    let prior = SpeedPrior::new(m.as_ref(), params(epsilon, k, precision, false));
    let method = self::method(method)?;
    to_py(
        py,
        prior
            .quasi(&bits(x)?, &bits(y)?, method, &mut rng(seed))
            .or_raise()?,
    )
}

/// `S(y | x) = S(xy) / S(x)`.
#[pyfunction]
#[pyo3(signature = (y, x, method = "classical", epsilon = 0.05, k = 3.0, seed = 0, tm = None))]
#[allow(clippy::too_many_arguments)]
fn conditional(
    py: Python<'_>,
    y: &str,
    x: &str,
    method: &str,
    epsilon: f64,
    k: f64,
    seed: u64,
    tm: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let m = machine(tm)?;
    let prior = SpeedPrior::new(m.as_ref(), params(epsilon, k, 6, false));
    let method = self::method(method)?;
    to_py(
        py,
        prior
            .conditional(&bits(y)?, &bits(x)?, method, &mut rng(seed))
            .or_raise()?,
    )
}

#[pyfunction]
fn laplace_rule(n_ones: u64, n_total: u64) -> PyResult<f64> {
    qsp_core::prior::laplace_rule(n_ones, n_total).or_raise()
}

fn history(steps: Vec<(usize, usize, bool)>) -> Vec<Step> {
    steps
        .into_iter()
        .map(|(action, observation, reward)| Step {
            action,
            observation,
            reward,
        })
        .collect()
}

/// Next action for a history of `(action, observation, reward)` triples.
#[pyfunction]
#[pyo3(signature = (steps, agent = "aixi-spd", depth = 2, window = 1, epsilon = None, k = None, seed = 0))]
#[allow(clippy::too_many_arguments)]
fn agent_action(
    py: Python<'_>,
    steps: Vec<(usize, usize, bool)>,
    agent: &str,
    depth: usize,
    window: usize,
    epsilon: Option<f64>,
    k: Option<f64>,
    seed: u64,
) -> PyResult<Py<PyAny>> {
    let prior = SpeedPrior::new(&Sk2, PriorParams::default());
    let h = history(steps);
    let al = Alphabets::binary();
    let d = match agent {
        "aixi-spd" => core_aixi_spd(&prior, &h, &al, depth, window),
        "aixiq" => core_aixiq(&prior, &h, &al, depth, window, epsilon, k, &mut rng(seed)),
        other => return Err(PyValueError::new_err(format!("unknown agent {other:?}"))),
    };
    to_py(py, d.or_raise()?)
}

/// Runs an episode in `pattern:<bits>` or `coin:<p>`.
#[pyfunction]
#[pyo3(signature = (env = "pattern:01", agent = "aixi-spd", length = 20, seed = 0, depth = 2, epsilon = None))]
fn run_episode(
    py: Python<'_>,
    env: &str,
    agent: &str,
    length: usize,
    seed: u64,
    depth: usize,
    epsilon: Option<f64>,
) -> PyResult<Py<PyAny>> {
    let spec = if let Some(p) = env.strip_prefix("pattern:") {
        EnvironmentSpec::pattern(bits(p)?.into_iter().map(usize::from).collect())
    } else if let Some(p) = env.strip_prefix("coin:") {
        let p: f64 = p
            .parse()
            .map_err(|_| PyValueError::new_err(format!("bad coin bias {p:?}")))?;
        EnvironmentSpec::biased_coin(p)
    } else {
        return Err(PyValueError::new_err(format!(
            "unknown environment {env:?}"
        )));
    }
    .or_raise()?;
    let kind = match agent {
        "aixi-spd" => AgentKind::AixiSpd,
        "aixiq" => AgentKind::Aixiq,
        "laplace" => AgentKind::LaplaceBaseline,
        "random" => AgentKind::Random,
        other => return Err(PyValueError::new_err(format!("unknown agent {other:?}"))),
    };
    let config = AgentConfig {
        depth,
        epsilon_override: epsilon,
        ..AgentConfig::default()
    };
    to_py(
        py,
        core_run_episode(&Sk2, &spec, kind, length, seed, &config).or_raise()?,
    )
}

#[pymodule]
fn qspeed(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    m.add("RetryError", m.py().get_type::<RetryError>())?;
    m.add_class::<PyOracle>()?;
    m.add_class::<PyState>()?;
    m.add_function(wrap_pyfunction!(set_max_qubits, m)?)?;
    m.add_function(wrap_pyfunction!(deutsch_jozsa, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(grover_search, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_count, m)?)?;
    m.add_function(wrap_pyfunction!(phase_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(shor_factor, m)?)?;
    m.add_function(wrap_pyfunction!(run_machine, m)?)?;
    m.add_function(wrap_pyfunction!(kolmogorov, m)?)?;
    m.add_function(wrap_pyfunction!(speed_prior, m)?)?;
    m.add_function(wrap_pyfunction!(quasi_conditional, m)?)?;
    m.add_function(wrap_pyfunction!(conditional, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_rule, m)?)?;
    m.add_function(wrap_pyfunction!(agent_action, m)?)?;
    m.add_function(wrap_pyfunction!(run_episode, m)?)?;
    Ok(())
}
