use num_complex::Complex64;
use rand::Rng;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::gate::{GateKind, GateSpec};
use super::matrix::Matrix;
use super::oracle::Oracle;
use crate::error::{Error, Result};

/// Allowed drift of the squared norm away from 1.
pub const NORM_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_QUBITS: usize = 24;
const HARD_MAX_QUBITS: usize = 30;

static MAX_QUBITS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_QUBITS);

/// Current register cap.
pub fn max_qubits() -> usize {
    MAX_QUBITS.load(Ordering::Relaxed)
}

/// Sets the process-wide register cap (at least 20, at most 30).
pub fn set_max_qubits(cap: usize) -> Result<()> {
    if !(20..=HARD_MAX_QUBITS).contains(&cap) {
        return Err(Error::Argument(format!(
            "qubit cap must lie in 20..={HARD_MAX_QUBITS}, got {cap}"
        )));
    }
    MAX_QUBITS.store(cap, Ordering::Relaxed);
    Ok(())
}

fn check_width(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 {
        return Err(Error::Argument(
            "a register needs at least one qubit".into(),
        ));
    }
    let cap = max_qubits();
    if num_qubits > cap {
        return Err(Error::Resource(format!(
            "{num_qubits} qubits exceeds the cap of {cap}"
        )));
    }
    Ok(())
}

/// Dense statevector over `num_qubits` qubits. Qubit 0 is the most significant
/// bit of the basis index, so `|q0 q1 … q(n-1)⟩` reads left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

/// Result of a destructive measurement.
#[derive(Clone, Debug)]
pub struct MeasurementOutcome {
    /// Measured bits in the order the qubits were requested.
    pub bits: Vec<bool>,
    /// The same bits read as an integer, first requested qubit most significant.
    pub value: usize,
    pub probability: f64,
    /// Renormalized state of the unmeasured qubits, in ascending qubit order.
    pub collapsed: Option<StateVector>,
}

impl StateVector {
    /// `|0…0⟩` on `num_qubits` qubits.
    pub fn new(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Argument(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Wraps explicit amplitudes; the norm must already be 1.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::Argument(format!(
                "amplitude count {dim} is not a power of two ≥ 2"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        check_width(num_qubits)?;
        let s = StateVector { num_qubits, amps };
        s.check_norm()?;
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn check_norm(&self) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Validation(format!("state norm drifted to {n}")));
        }
        Ok(())
    }

    #[inline]
    fn mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    fn check_qubits(&self, qubits: &[usize]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(Error::Argument(format!(
                    "qubit {q} out of range for {} qubits",
                    self.num_qubits
                )));
            }
            if qubits[..i].contains(&q) {
                return Err(Error::Argument(format!("qubit {q} listed twice")));
            }
        }
        Ok(())
    }

    /// Reads the bits of `index` at `qubits`, first listed qubit most significant.
    #[inline]
    fn gather(&self, index: usize, masks: &[usize]) -> usize {
        masks
            .iter()
            .fold(0, |acc, &m| (acc << 1) | usize::from(index & m != 0))
    }

    /// `|self⟩ ⊗ |other⟩`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        check_width(self.num_qubits + other.num_qubits)?;
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(StateVector {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        })
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Argument(format!(
                "inner product of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|self⟩⟨other|`, a `dim(self) × dim(other)` matrix.
    pub fn outer(&self, other: &StateVector) -> Matrix {
        let mut m = Matrix::zeros(self.dim(), other.dim());
        for (r, a) in self.amps.iter().enumerate() {
            for (c, b) in other.amps.iter().enumerate() {
                m.set(r, c, a * b.conj());
            }
        }
        m
    }

    pub fn apply_gate(&mut self, gate: &GateSpec) -> Result<()> {
        self.check_qubits(gate.targets())?;
        let (controls, targets, kind) = gate.flatten();
        let ctrl_mask: usize = controls.iter().map(|&q| self.mask(q)).sum();
        let tmasks: Vec<usize> = targets.iter().map(|&q| self.mask(q)).collect();
        let involved = ctrl_mask | tmasks.iter().sum::<usize>();
        let free: Vec<usize> = (0..self.num_qubits)
            .map(|b| 1usize << b)
            .filter(|m| involved & m == 0)
            .collect();
        let k = targets.len();
        let offsets: Vec<usize> = (0..1usize << k)
            .map(|s| {
                (0..k)
                    .filter(|j| s >> (k - 1 - j) & 1 == 1)
                    .map(|j| tmasks[j])
                    .sum()
            })
            .collect();
        let blocks = 1usize << free.len();
        let base_of = |r: usize| -> usize {
            free.iter()
                .enumerate()
                .filter(|(i, _)| r >> i & 1 == 1)
                .map(|(_, &m)| m)
                .sum::<usize>()
                | ctrl_mask
        };

        match kind {
            GateKind::PhaseFlipAboutZero => {
                for r in 0..blocks {
                    let base = base_of(r);
                    for &off in &offsets[1..] {
                        self.amps[base | off] = -self.amps[base | off];
                    }
                }
            }
            GateKind::Phase(_) | GateKind::Pi8 => {
                let phase = kind_matrix_entry(kind);
                let t = offsets[1];
                for r in 0..blocks {
                    let i = base_of(r) | t;
                    self.amps[i] *= phase;
                }
            }
            _ => {
                let m = match kind {
                    GateKind::Explicit(m) => m.clone(),
                    other => GateSpec::new(other.clone(), targets.clone())?.matrix(),
                };
                if k == 1 {
                    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
                    let t = offsets[1];
                    for r in 0..blocks {
                        let i0 = base_of(r);
                        let (x0, x1) = (self.amps[i0], self.amps[i0 | t]);
                        self.amps[i0] = a * x0 + b * x1;
                        self.amps[i0 | t] = c * x0 + d * x1;
                    }
                } else {
                    let mut buf = vec![Complex64::new(0.0, 0.0); offsets.len()];
                    for r in 0..blocks {
                        let base = base_of(r);
                        for (v, &off) in buf.iter_mut().zip(&offsets) {
                            *v = self.amps[base | off];
                        }
                        let out = m.mul_vec(&buf);
                        for (v, &off) in out.into_iter().zip(&offsets) {
                            self.amps[base | off] = v;
                        }
                    }
                }
            }
        }
        if matches!(kind, GateKind::Explicit(_)) {
            self.check_norm()?;
        }
        Ok(())
    }

    /// Applies `U_f |x⟩|y⟩ = |x⟩|y ⊕ f(x)⟩`.
    pub fn apply_oracle(
        &mut self,
        oracle: &Oracle,
        inputs: &[usize],
        ancilla: usize,
    ) -> Result<()> {
        if inputs.len() != oracle.arity() {
            return Err(Error::Argument(format!(
                "oracle of arity {} applied to {} input qubits",
                oracle.arity(),
                inputs.len()
            )));
        }
        if inputs.contains(&ancilla) {
            return Err(Error::Argument("ancilla qubit is also an input".into()));
        }
        let mut all = inputs.to_vec();
        all.push(ancilla);
        self.check_qubits(&all)?;
        let masks: Vec<usize> = inputs.iter().map(|&q| self.mask(q)).collect();
        let amask = self.mask(ancilla);
        for i in 0..self.dim() {
            if i & amask == 0 && oracle.eval(self.gather(i, &masks)) {
                self.amps.swap(i, i | amask);
            }
        }
        Ok(())
    }

    /// Exact marginal distribution over `qubits`, indexed by outcome value.
    pub fn probabilities(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        self.check_qubits(qubits)?;
        let masks: Vec<usize> = qubits.iter().map(|&q| self.mask(q)).collect();
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[self.gather(i, &masks)] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Measures `qubits`, consuming the state.
    pub fn measure<R: Rng + ?Sized>(
        self,
        qubits: &[usize],
        rng: &mut R,
    ) -> Result<MeasurementOutcome> {
        let probs = self.probabilities(qubits)?;
        let value = sample_index(&probs, rng);
        let probability = probs[value];
        let k = qubits.len();
        let bits = (0..k).map(|j| value >> (k - 1 - j) & 1 == 1).collect();

        let collapsed = if k == self.num_qubits {
            None
        } else {
            let masks: Vec<usize> = qubits.iter().map(|&q| self.mask(q)).collect();
            let rest: Vec<usize> = (0..self.num_qubits)
                .filter(|q| !qubits.contains(q))
                .map(|q| self.mask(q))
                .collect();
            let scale = 1.0 / probability.sqrt();
            let mut amps = vec![Complex64::new(0.0, 0.0); 1 << rest.len()];
            for (i, a) in self.amps.iter().enumerate() {
                if self.gather(i, &masks) == value {
                    amps[self.gather(i, &rest)] = a * scale;
                }
            }
            Some(StateVector {
                num_qubits: rest.len(),
                amps,
            })
        };
        Ok(MeasurementOutcome {
            bits,
            value,
            probability,
            collapsed,
        })
    }

    pub fn measure_all<R: Rng + ?Sized>(self, rng: &mut R) -> Result<MeasurementOutcome> {
        let all: Vec<usize> = (0..self.num_qubits).collect();
        self.measure(&all, rng)
    }
}

fn kind_matrix_entry(kind: &GateKind) -> Complex64 {
    match kind {
        GateKind::Pi8 => Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        GateKind::Phase(a) => Complex64::from_polar(1.0, *a),
        _ => unreachable!("only diagonal single-qubit kinds"),
    }
}

/// Draws an index from a discrete distribution.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = i;
        }
        acc += p;
        if u < acc {
            return i;
        }
    }
    last_nonzero
}

/// Formats `value` as a `width`-bit string, most significant bit first.
pub fn bitstring(value: usize, width: usize) -> String {
    (0..width)
        .map(|j| {
            if value >> (width - 1 - j) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}
