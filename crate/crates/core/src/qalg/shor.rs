use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rand::Rng;
use serde::Serialize;

use super::phase::{phase_distribution, UnitaryPowers};
use crate::error::{Error, Result};
use crate::qsim::{max_qubits, sample_index, Matrix, StateVector};

pub const ORDER_RETRY_CAP: usize = 20;
pub const SHOR_RESTART_CAP: usize = 10;
pub const DEFAULT_MAX_SHOR_QUBITS: usize = 18;
pub const DEFAULT_SHOR_EPSILON: f64 = 0.25;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(a, b)` with `a^b = n` and `b ≥ 2`, if any.
pub fn perfect_power(n: u64) -> Option<(u64, u32)> {
    if n < 4 {
        return None;
    }
    for b in (2..=63 - n.leading_zeros()).rev() {
        let guess = (n as f64).powf(1.0 / b as f64).round() as u64;
        for a in guess.saturating_sub(1).max(2)..=guess + 1 {
            if a.checked_pow(b) == Some(n) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Last convergent `s/r` of `num/den` with `r ≤ limit`, in lowest terms.
pub fn continued_fraction(num: u64, den: u64, limit: u64) -> Result<(u64, u64)> {
    if limit == 0 || den == 0 {
        return Err(Error::Argument(
            "denominator and limit must be positive".into(),
        ));
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    let (mut a, mut b) = (num as u128, den as u128);
    let mut best = (0u128, 1u128);
    while b != 0 {
        let term = a / b;
        (a, b) = (b, a - term * b);
        let p = term * p1 + p0;
        let q = term * q1 + q0;
        if q > limit as u128 {
            break;
        }
        best = (p, q);
        (p0, q0, p1, q1) = (p1, q1, p, q);
    }
    Ok((best.0 as u64, best.1 as u64))
}

/// Permutation matrix of `|y⟩ ↦ |a·y mod N⟩` on `width` qubits; `y ≥ N` is left fixed.
pub fn modmul_matrix(a: u64, modulus: u64, width: usize) -> Matrix {
    let dim = 1usize << width;
    let mut m = Matrix::zeros(dim, dim);
    for y in 0..dim {
        let image = if (y as u64) < modulus {
            (a * y as u64 % modulus) as usize
        } else {
            y
        };
        m.set(image, y, num_complex::Complex64::new(1.0, 0.0));
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderResult {
    pub order: u64,
    pub samples: usize,
    /// Counting register as specified by the error target.
    pub t_requested: usize,
    /// Counting register actually simulated after applying the qubit cap.
    pub t_used: usize,
    pub work_qubits: usize,
    pub outcomes: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ShorOptions {
    pub epsilon: f64,
    pub max_qubits: usize,
    pub order_retry_cap: usize,
    pub restart_cap: usize,
}

impl Default for ShorOptions {
    fn default() -> Self {
        ShorOptions {
            epsilon: DEFAULT_SHOR_EPSILON,
            max_qubits: DEFAULT_MAX_SHOR_QUBITS,
            order_retry_cap: ORDER_RETRY_CAP,
            restart_cap: SHOR_RESTART_CAP,
        }
    }
}

/// Order finding with exact output distributions cached per `(x, N, t)`.
#[derive(Debug, Default)]
pub struct OrderFinder {
    cache: Mutex<HashMap<(u64, u64, usize), Arc<Vec<f64>>>>,
}

pub fn register_sizes(modulus: u64, options: &ShorOptions) -> Result<(usize, usize, usize)> {
    let width = (64 - (modulus - 1).leading_zeros()) as usize;
    let extra = (2.0 + 1.0 / (2.0 * options.epsilon)).log2().ceil() as usize;
    let requested = 2 * width + 1 + extra;
    let budget = options.max_qubits.min(max_qubits());
    if width + 1 > budget {
        return Err(Error::Resource(format!(
            "modulus {modulus} needs more than {budget} qubits"
        )));
    }
    Ok((width, requested, requested.min(budget - width)))
}

impl OrderFinder {
    pub fn new() -> Self {
        Self::default()
    }

    fn distribution(&self, x: u64, modulus: u64, width: usize, t: usize) -> Result<Arc<Vec<f64>>> {
        let key = (x, modulus, t);
        if let Some(d) = self.cache.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let mut powers = Vec::with_capacity(t);
        let mut a = x % modulus;
        for _ in 0..t {
            powers.push(modmul_matrix(a, modulus, width));
            a = a * a % modulus;
        }
        let work = StateVector::basis(width, 1)?;
        let d = Arc::new(phase_distribution(
            &UnitaryPowers::from_powers(powers)?,
            &work,
            t,
        )?);
        self.cache.lock().unwrap().insert(key, d.clone());
        Ok(d)
    }

    pub fn order_find<R: Rng + ?Sized>(
        &self,
        x: u64,
        modulus: u64,
        options: &ShorOptions,
        rng: &mut R,
    ) -> Result<OrderResult> {
        if modulus < 2 || x == 0 || gcd(x, modulus) != 1 {
            return Err(Error::Argument(format!(
                "order of {x} mod {modulus} is undefined"
            )));
        }
        if !(options.epsilon > 0.0 && options.epsilon < 1.0) {
            return Err(Error::Argument(format!(
                "epsilon must lie in (0, 1), got {}",
                options.epsilon
            )));
        }
        let (width, t_requested, t) = register_sizes(modulus, options)?;
        let dist = self.distribution(x, modulus, width, t)?;
        let mut candidates: Vec<u64> = Vec::new();
        let mut outcomes = Vec::new();
        for sample in 1..=options.order_retry_cap {
            let j = sample_index(&dist, rng);
            outcomes.push(j);
            let (_, r) = continued_fraction(j as u64, 1u64 << t, modulus - 1)?;
            let mut tries = vec![r];
            tries.extend(candidates.iter().map(|&c| lcm(c, r)));
            if let Some(found) = tries
                .into_iter()
                .find(|&r| r < modulus && mod_pow(x, r, modulus) == 1)
            {
                return Ok(OrderResult {
                    order: reduce_order(x, found, modulus),
                    samples: sample,
                    t_requested,
                    t_used: t,
                    work_qubits: width,
                    outcomes,
                });
            }
            candidates.push(r);
        }
        Err(Error::Failure(format!(
            "order of {x} mod {modulus} not found in {} samples; outcomes {outcomes:?}",
            options.order_retry_cap
        )))
    }
}

/// Strips prime factors from a verified multiple of the order.
fn reduce_order(x: u64, mut r: u64, modulus: u64) -> u64 {
    let mut p = 2;
    let mut rest = r;
    while rest > 1 {
        if rest % p == 0 {
            while r % p == 0 && mod_pow(x, r / p, modulus) == 1 {
                r /= p;
            }
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    r
}

pub fn order_find<R: Rng + ?Sized>(
    x: u64,
    modulus: u64,
    epsilon: f64,
    rng: &mut R,
) -> Result<OrderResult> {
    let options = ShorOptions {
        epsilon,
        ..ShorOptions::default()
    };
    OrderFinder::new().order_find(x, modulus, &options, rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShorBranch {
    Even,
    PerfectPower,
    SharedFactor,
    OrderFinding,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShorResult {
    pub factor: u64,
    pub branch: ShorBranch,
    pub x: Option<u64>,
    pub order: Option<OrderResult>,
    pub restarts: usize,
}

/// Finds a nontrivial factor of a composite `n`.
pub fn shor_factor<R: Rng + ?Sized>(
    n: u64,
    finder: &OrderFinder,
    options: &ShorOptions,
    rng: &mut R,
) -> Result<ShorResult> {
    if n < 4 {
        return Err(Error::Argument(format!("{n} has no nontrivial factor")));
    }
    if is_prime(n) {
        return Err(Error::Argument(format!("{n} is prime")));
    }
    let done = |factor, branch, x, order, restarts| ShorResult {
        factor,
        branch,
        x,
        order,
        restarts,
    };
    if n % 2 == 0 {
        return Ok(done(2, ShorBranch::Even, None, None, 0));
    }
    if let Some((a, _)) = perfect_power(n) {
        return Ok(done(a, ShorBranch::PerfectPower, None, None, 0));
    }
    let mut log = Vec::new();
    for restart in 0..options.restart_cap {
        let x = rng.gen_range(1..n);
        let g = gcd(x, n);
        if g > 1 {
            return Ok(done(g, ShorBranch::SharedFactor, Some(x), None, restart));
        }
        let found = match finder.order_find(x, n, options, rng) {
            Ok(o) => o,
            Err(Error::Failure(msg)) => {
                log.push(msg);
                continue;
            }
            Err(e) => return Err(e),
        };
        let r = found.order;
        if r % 2 == 0 {
            let half = mod_pow(x, r / 2, n);
            if half != n - 1 {
                for cand in [gcd(half + n - 1, n), gcd(half + 1, n)] {
                    if cand > 1 && cand < n {
                        return Ok(done(
                            cand,
                            ShorBranch::OrderFinding,
                            Some(x),
                            Some(found),
                            restart,
                        ));
                    }
                }
            }
        }
        log.push(format!("x={x} r={r} unusable"));
    }
    Err(Error::Failure(format!(
        "no factor of {n} after {} restarts: {}",
        options.restart_cap,
        log.join("; ")
    )))
}
