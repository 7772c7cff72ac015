use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::Serialize;

use super::tables::{phase_oracles, PhaseOracles};
use crate::error::{Error, Result};
use crate::machine::{format_bits, Machine};
use crate::qalg::{estimate_fraction, QuantumCounter};

pub const DEFAULT_EPSILON: f64 = 0.05;
pub const DEFAULT_K: f64 = 3.0;
pub const DEFAULT_PRECISION: usize = 6;
pub const DEFAULT_CLASSICAL_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PriorMethod {
    Classical,
    Qcount,
    DjSampling,
}

#[derive(Clone, Debug)]
pub struct PriorParams {
    pub epsilon: f64,
    /// Hoeffding confidence parameter for the sampling estimators.
    pub k: f64,
    /// Precision bits for quantum counting.
    pub precision: usize,
    /// Largest `ℓ(x)` enumerated.
    pub cap: usize,
    /// Use the algorithms' literal empty-string branches and fraction weighting.
    pub strict_paper: bool,
}

impl Default for PriorParams {
    fn default() -> Self {
        PriorParams {
            epsilon: DEFAULT_EPSILON,
            k: DEFAULT_K,
            precision: DEFAULT_PRECISION,
            cap: DEFAULT_CLASSICAL_CAP,
            strict_paper: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PriorEstimate {
    pub x: String,
    /// Conditioning context, for quasi-conditional estimates.
    pub y: Option<String>,
    pub method: PriorMethod,
    pub value: f64,
    /// `num_i` for phases `1..=n²`.
    pub per_phase_counts: Vec<f64>,
    pub error_bound: f64,
    pub confidence: f64,
    /// Trials per phase for the sampling method.
    pub trials: Option<usize>,
    /// For the sampling method: the bound obtained by pushing each Hoeffding
    /// interval through `x ↦ (1 − √x)/2` instead of taking `ε` on the fraction.
    pub transformed_bound: Option<f64>,
    /// Phases whose count estimate was clamped to `[0, 2^n]`.
    pub clamped_phases: Vec<usize>,
    pub machine_id: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionalEstimate {
    pub numerator: PriorEstimate,
    pub denominator: PriorEstimate,
    pub value: f64,
    pub error_bound: f64,
}

/// Speed-prior estimators over one machine, caching phase tables and counting distributions.
pub struct SpeedPrior<'m> {
    machine: &'m dyn Machine,
    pub params: PriorParams,
    tables: Mutex<HashMap<(Vec<bool>, Vec<bool>), Arc<PhaseOracles>>>,
    counter: QuantumCounter,
}

fn weight(i: usize, n: usize) -> f64 {
    0.5f64.powi((i + n) as i32)
}

impl<'m> SpeedPrior<'m> {
    pub fn new(machine: &'m dyn Machine, params: PriorParams) -> Self {
        SpeedPrior {
            machine,
            params,
            tables: Mutex::new(HashMap::new()),
            counter: QuantumCounter::new(),
        }
    }

    pub fn machine(&self) -> &dyn Machine {
        self.machine
    }

    pub fn tables(&self, x: &[bool], y: &[bool]) -> Result<Arc<PhaseOracles>> {
        let key = (x.to_vec(), y.to_vec());
        if let Some(t) = self.tables.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(phase_oracles(self.machine, x, y, self.params.cap)?);
        self.tables.lock().unwrap().insert(key, t.clone());
        Ok(t)
    }

    fn empty_record(
        &self,
        x: &[bool],
        y: Option<&[bool]>,
        method: PriorMethod,
        value: f64,
    ) -> PriorEstimate {
        PriorEstimate {
            x: format_bits(x),
            y: y.map(format_bits),
            method,
            value,
            per_phase_counts: Vec::new(),
            error_bound: 0.0,
            confidence: 1.0,
            trials: None,
            transformed_bound: None,
            clamped_phases: Vec::new(),
            machine_id: self.machine.id(),
        }
    }

    /// Value for `x = λ`: 1, or `1 − 2^{−n²} = 0` under the literal reading.
    fn empty_value(&self) -> f64 {
        if self.params.strict_paper {
            0.0
        } else {
            1.0
        }
    }

    /// Exact fixed-length speed prior by full enumeration.
    pub fn classical(&self, x: &[bool]) -> Result<PriorEstimate> {
        if x.is_empty() {
            return Ok(self.empty_record(x, None, PriorMethod::Classical, self.empty_value()));
        }
        let t = self.tables(x, &[])?;
        Ok(self.exact(x, None, &t, PriorMethod::Classical))
    }

    fn exact(
        &self,
        x: &[bool],
        y: Option<&[bool]>,
        t: &PhaseOracles,
        method: PriorMethod,
    ) -> PriorEstimate {
        let counts: Vec<f64> = t.counts().into_iter().map(|c| c as f64).collect();
        let value = counts
            .iter()
            .enumerate()
            .map(|(j, c)| weight(j + 1, t.n) * c)
            .sum();
        PriorEstimate {
            per_phase_counts: counts,
            ..self.empty_record(x, y, method, value)
        }
    }

    /// Quantum-counting estimate with `ε/n²` failure probability per phase.
    pub fn qcount<R: Rng + ?Sized>(&self, x: &[bool], rng: &mut R) -> Result<PriorEstimate> {
        if x.is_empty() {
            return Ok(self.empty_record(x, None, PriorMethod::Qcount, self.empty_value()));
        }
        let t = self.tables(x, &[])?;
        self.qcount_tables(x, None, &t, rng)
    }

    fn qcount_tables<R: Rng + ?Sized>(
        &self,
        x: &[bool],
        y: Option<&[bool]>,
        t: &PhaseOracles,
        rng: &mut R,
    ) -> Result<PriorEstimate> {
        let p = &self.params;
        let n = t.n;
        let eps_i = p.epsilon / t.phases() as f64;
        let mut counts = Vec::with_capacity(t.phases());
        let mut value = 0.0;
        let mut bound = 0.0;
        let mut clamped = Vec::new();
        for (j, oracle) in t.tables.iter().enumerate() {
            let est = self.counter.count(oracle, p.precision, eps_i, rng)?;
            if est.clamped {
                clamped.push(j + 1);
            }
            value += weight(j + 1, n) * est.m_hat;
            bound += weight(j + 1, n) * est.error_bound;
            counts.push(est.m_hat);
        }
        Ok(PriorEstimate {
            per_phase_counts: counts,
            error_bound: bound,
            confidence: 1.0 - p.epsilon,
            clamped_phases: clamped,
            ..self.empty_record(x, y, PriorMethod::Qcount, value)
        })
    }

    /// Modified-DJ sampling estimate with `⌈k/ε²⌉` trials per phase.
    pub fn dj<R: Rng + ?Sized>(&self, x: &[bool], rng: &mut R) -> Result<PriorEstimate> {
        if x.is_empty() {
            return Ok(self.empty_record(x, None, PriorMethod::DjSampling, self.empty_value()));
        }
        let t = self.tables(x, &[])?;
        self.dj_tables(x, None, &t, rng)
    }

    fn dj_tables<R: Rng + ?Sized>(
        &self,
        x: &[bool],
        y: Option<&[bool]>,
        t: &PhaseOracles,
        rng: &mut R,
    ) -> Result<PriorEstimate> {
        self.dj_tables_with(x, y, t, self.params.epsilon, self.params.k, rng)
    }

    fn dj_tables_with<R: Rng + ?Sized>(
        &self,
        x: &[bool],
        y: Option<&[bool]>,
        t: &PhaseOracles,
        epsilon: f64,
        k: f64,
        rng: &mut R,
    ) -> Result<PriorEstimate> {
        let p = PriorParams {
            epsilon,
            k,
            ..self.params.clone()
        };
        let p = &p;
        let n = t.n;
        let scale = if p.strict_paper {
            1.0
        } else {
            (1u64 << n) as f64
        };
        let mut counts = Vec::with_capacity(t.phases());
        let mut value = 0.0;
        let mut transformed = 0.0;
        let mut trials = 0;
        for (j, oracle) in t.tables.iter().enumerate() {
            let est = estimate_fraction(oracle, p.epsilon, p.k, rng)?;
            trials = est.trials;
            let num = scale * est.fraction;
            value += weight(j + 1, n) * num;
            transformed += weight(j + 1, n) * scale * est.fraction_bound;
            counts.push(num);
        }
        let phases = t.phases() as f64;
        let horizon = 1.0 - 0.5f64.powi(t.phases() as i32);
        let nominal = horizon * p.epsilon * scale * 0.5f64.powi(n as i32);
        Ok(PriorEstimate {
            per_phase_counts: counts,
            error_bound: nominal,
            confidence: (1.0 - 2.0 * phases * (-2.0 * p.k).exp()).max(0.0),
            trials: Some(trials),
            transformed_bound: Some(transformed),
            ..self.empty_record(x, y, PriorMethod::DjSampling, value)
        })
    }

    pub fn estimate<R: Rng + ?Sized>(
        &self,
        x: &[bool],
        method: PriorMethod,
        rng: &mut R,
    ) -> Result<PriorEstimate> {
        match method {
            PriorMethod::Classical => self.classical(x),
            PriorMethod::Qcount => self.qcount(x, rng),
            PriorMethod::DjSampling => self.dj(x, rng),
        }
    }

    /// `S(y|x) = S(xy)/S(x)` with first-order error propagation.
    pub fn conditional<R: Rng + ?Sized>(
        &self,
        y: &[bool],
        x: &[bool],
        method: PriorMethod,
        rng: &mut R,
    ) -> Result<ConditionalEstimate> {
        let mut xy = x.to_vec();
        xy.extend_from_slice(y);
        let denominator = self.estimate(x, method, rng)?;
        if denominator.value <= 0.0 || denominator.error_bound >= denominator.value {
            return Err(Error::UndefinedConditional(format!(
                "S({}) = {} ± {}",
                denominator.x, denominator.value, denominator.error_bound
            )));
        }
        let numerator = self.estimate(&xy, method, rng)?;
        let value = numerator.value / denominator.value;
        let error_bound =
            (numerator.error_bound + value * denominator.error_bound) / denominator.value;
        Ok(ConditionalEstimate {
            numerator,
            denominator,
            value,
            error_bound,
        })
    }

    /// Quasi-conditional prior `S'(x, y)` with the chosen estimator; the sampling
    /// method is the quantum algorithm, `Classical` the exact enumeration.
    pub fn quasi<R: Rng + ?Sized>(
        &self,
        x: &[bool],
        y: &[bool],
        method: PriorMethod,
        rng: &mut R,
    ) -> Result<PriorEstimate> {
        if x.is_empty() {
            // S'_i(λ, y) = 1; the literal algorithm branch gives 1 − 2^{−ℓ(x)} = 0
            return Ok(self.empty_record(x, Some(y), method, self.empty_value()));
        }
        let t = self.tables(x, y)?;
        match method {
            PriorMethod::Classical => Ok(self.exact(x, Some(y), &t, method)),
            PriorMethod::Qcount => self.qcount_tables(x, Some(y), &t, rng),
            PriorMethod::DjSampling => self.dj_tables(x, Some(y), &t, rng),
        }
    }
}

impl SpeedPrior<'_> {
    /// Sampled `S'(x, y)` with an explicit per-call accuracy.
    pub fn quasi_sampled<R: Rng + ?Sized>(
        &self,
        x: &[bool],
        y: &[bool],
        epsilon: f64,
        k: f64,
        rng: &mut R,
    ) -> Result<PriorEstimate> {
        if x.is_empty() {
            return Ok(self.empty_record(x, Some(y), PriorMethod::DjSampling, self.empty_value()));
        }
        let t = self.tables(x, y)?;
        self.dj_tables_with(x, Some(y), &t, epsilon, k, rng)
    }
}

pub fn speed_prior_classical(machine: &dyn Machine, x: &[bool]) -> Result<PriorEstimate> {
    SpeedPrior::new(machine, PriorParams::default()).classical(x)
}

pub fn speed_prior_qcount<R: Rng + ?Sized>(
    machine: &dyn Machine,
    x: &[bool],
    m: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<PriorEstimate> {
    let params = PriorParams {
        precision: m,
        epsilon,
        ..PriorParams::default()
    };
    SpeedPrior::new(machine, params).qcount(x, rng)
}

pub fn speed_prior_dj<R: Rng + ?Sized>(
    machine: &dyn Machine,
    x: &[bool],
    epsilon: f64,
    k: f64,
    rng: &mut R,
) -> Result<PriorEstimate> {
    let params = PriorParams {
        epsilon,
        k,
        ..PriorParams::default()
    };
    SpeedPrior::new(machine, params).dj(x, rng)
}

pub fn quasi_conditional<R: Rng + ?Sized>(
    machine: &dyn Machine,
    x: &[bool],
    y: &[bool],
    epsilon: f64,
    k: f64,
    rng: &mut R,
) -> Result<PriorEstimate> {
    let params = PriorParams {
        epsilon,
        k,
        ..PriorParams::default()
    };
    SpeedPrior::new(machine, params).quasi(x, y, PriorMethod::DjSampling, rng)
}

/// Rule of succession `(n₁ + 1)/(n + 2)`.
pub fn laplace_rule(n_ones: u64, n_total: u64) -> Result<f64> {
    let (num, den) = laplace_fraction(n_ones, n_total)?;
    Ok(num as f64 / den as f64)
}

/// The rule of succession as an unreduced fraction `(n₁ + 1, n + 2)`.
pub fn laplace_fraction(n_ones: u64, n_total: u64) -> Result<(u64, u64)> {
    if n_ones > n_total {
        return Err(Error::Argument(format!(
            "{n_ones} ones in a history of {n_total}"
        )));
    }
    let den = n_total
        .checked_add(2)
        .ok_or_else(|| Error::Argument("history too long".into()))?;
    Ok((n_ones + 1, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{parse_bits, Sk2};
    use crate::rng::seeded;

    fn b(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn empty_string() {
        let sp = SpeedPrior::new(&Sk2, PriorParams::default());
        assert_eq!(sp.classical(&[]).unwrap().value, 1.0);
        let strict = SpeedPrior::new(
            &Sk2,
            PriorParams {
                strict_paper: true,
                ..PriorParams::default()
            },
        );
        assert_eq!(strict.classical(&[]).unwrap().value, 0.0);
        assert_eq!(
            strict
                .quasi(&[], &b("01"), PriorMethod::DjSampling, &mut seeded(0))
                .unwrap()
                .value,
            0.0
        );
    }

    #[test]
    fn one_bit_strings() {
        // programs "0" and "1" hold no complete opcode and emit nothing
        for x in ["0", "1"] {
            let e = speed_prior_classical(&Sk2, &b(x)).unwrap();
            assert_eq!(e.value, 0.0);
            assert_eq!(e.per_phase_counts, vec![0.0]);
        }
    }

    #[test]
    fn four_bit_value_by_hand() {
        // x = 1111: only 0111 qualifies (prefixes 0, 01, 011 emit at most one bit);
        // it needs 7 steps, so phases 7..16 count it: Σ_{i=7}^{16} 2^{-(i+4)}
        let e = speed_prior_classical(&Sk2, &b("1111")).unwrap();
        let expect: f64 = (7..=16).map(|i| 0.5f64.powi(i + 4)).sum();
        assert_eq!(e.value, expect);
        assert_eq!(e.per_phase_counts.iter().filter(|&&c| c == 1.0).count(), 10);
    }

    #[test]
    fn zero_tables_give_exact_zero_for_quantum_methods() {
        let mut rng = seeded(4);
        let e = speed_prior_qcount(&Sk2, &b("10"), 3, 0.1, &mut rng).unwrap();
        assert_eq!(e.value, 0.0);
        let e = speed_prior_dj(&Sk2, &b("10"), 0.1, 3.0, &mut rng).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.error_bound, (1.0 - 0.5f64.powi(4)) * 0.1);
    }

    #[test]
    fn conditional_identities() {
        let sp = SpeedPrior::new(&Sk2, PriorParams::default());
        let c = sp
            .conditional(&b("1111"), &[], PriorMethod::Classical, &mut seeded(0))
            .unwrap();
        assert_eq!(c.value, sp.classical(&b("1111")).unwrap().value);
        let r = sp.conditional(&b("1"), &b("10"), PriorMethod::Classical, &mut seeded(0));
        assert!(matches!(r, Err(Error::UndefinedConditional(_))));
        let strict = SpeedPrior::new(
            &Sk2,
            PriorParams {
                strict_paper: true,
                ..PriorParams::default()
            },
        );
        assert!(strict
            .conditional(&b("1"), &[], PriorMethod::Classical, &mut seeded(0))
            .is_err());
    }

    #[test]
    fn quasi_with_empty_context_is_plain_prior() {
        let sp = SpeedPrior::new(&Sk2, PriorParams::default());
        let a = sp
            .quasi(&b("1111"), &[], PriorMethod::Classical, &mut seeded(0))
            .unwrap();
        assert_eq!(a.value, sp.classical(&b("1111")).unwrap().value);
        let d1 = sp
            .quasi(&b("1111"), &[], PriorMethod::DjSampling, &mut seeded(9))
            .unwrap();
        let d2 = sp.dj(&b("1111"), &mut seeded(9)).unwrap();
        assert_eq!(d1.value, d2.value);
    }

    #[test]
    fn laplace_examples() {
        assert_eq!(laplace_rule(0, 0).unwrap(), 0.5);
        assert_eq!(laplace_rule(2, 2).unwrap(), 0.75);
        let (num, den) = laplace_fraction(1_000_000_000_000, 1_000_000_000_000).unwrap();
        assert_eq!(den - num, 1);
        assert_eq!(den, 1_000_000_000_002);
        assert!(laplace_rule(3, 2).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            speed_prior_classical(&Sk2, &[true; 13]),
            Err(Error::Resource(_))
        ));
    }
}
