use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::qft::inverse_qft_circuit;
use crate::error::{Error, Result};
use crate::qsim::{max_qubits, sample_index, GateSpec, Matrix, StateVector};

/// Tolerance on `‖U·v − λv‖` for the eigenstate precondition.
pub const EIGEN_TOLERANCE: f64 = 1e-6;

/// `U^{2^j}` for `j = 0..count`.
#[derive(Clone, Debug)]
pub struct UnitaryPowers {
    powers: Vec<Matrix>,
}

impl UnitaryPowers {
    /// Builds the family by repeated squaring of `u`.
    pub fn by_squaring(u: &Matrix, count: usize) -> Result<Self> {
        if !u.is_square() || !u.rows().is_power_of_two() || u.rows() < 2 {
            return Err(Error::Argument(format!(
                "{}x{} is not a qubit operator",
                u.rows(),
                u.cols()
            )));
        }
        let mut powers = Vec::with_capacity(count);
        let mut cur = u.clone();
        for j in 0..count {
            if j > 0 {
                cur = cur.matmul(&cur)?;
            }
            powers.push(cur.clone());
        }
        Ok(UnitaryPowers { powers })
    }

    /// Uses powers computed elsewhere (e.g. classically for modular multiplication).
    pub fn from_powers(powers: Vec<Matrix>) -> Result<Self> {
        let dim = powers.first().map(Matrix::rows).unwrap_or(0);
        if dim < 2
            || !dim.is_power_of_two()
            || powers.iter().any(|p| p.rows() != dim || p.cols() != dim)
        {
            return Err(Error::Argument(
                "powers must be square matrices of one qubit dimension".into(),
            ));
        }
        Ok(UnitaryPowers { powers })
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    /// `U^{2^j}`.
    pub fn power(&self, j: usize) -> &Matrix {
        &self.powers[j]
    }

    pub fn work_qubits(&self) -> usize {
        self.powers[0].rows().trailing_zeros() as usize
    }
}

/// Counting-register width for `m` bits of accuracy with failure probability `epsilon`.
pub fn counting_qubits(m: usize, epsilon: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Argument(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    if m == 0 {
        return Err(Error::Argument("precision must be at least one bit".into()));
    }
    Ok(m + (2.0 + 1.0 / (2.0 * epsilon)).log2().ceil() as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseEstimate {
    /// `j / 2^t` for the measured counting value `j`.
    pub phase: f64,
    pub outcome: usize,
    pub precision_bits: usize,
    pub t_register: usize,
    pub confidence: f64,
    /// Probability of the observed outcome.
    pub probability: f64,
}

/// Runs the phase-estimation circuit and returns the exact distribution of the
/// counting register. `work` need not be an eigenstate.
pub fn phase_distribution(
    powers: &UnitaryPowers,
    work: &StateVector,
    t: usize,
) -> Result<Vec<f64>> {
    if powers.len() < t {
        return Err(Error::Argument(format!(
            "{} powers supplied, {t} needed",
            powers.len()
        )));
    }
    let w = powers.work_qubits();
    if work.num_qubits() != w {
        return Err(Error::Argument(format!(
            "work state has {} qubits, operator acts on {w}",
            work.num_qubits()
        )));
    }
    if t + w > max_qubits() {
        return Err(Error::Resource(format!(
            "phase estimation needs {} qubits, cap is {}",
            t + w,
            max_qubits()
        )));
    }
    let mut state = StateVector::new(t)?.tensor(work)?;
    let counting: Vec<usize> = (0..t).collect();
    let work_qubits: Vec<usize> = (t..t + w).collect();
    for &q in &counting {
        state.apply_gate(&GateSpec::h(q))?;
    }
    for q in 0..t {
        let u = GateSpec::explicit(powers.power(t - 1 - q).clone(), work_qubits.clone())?;
        state.apply_gate(&GateSpec::controlled(u, &[q])?)?;
    }
    for g in inverse_qft_circuit(&counting)? {
        state.apply_gate(&g)?;
    }
    state.check_norm()?;
    state.probabilities(&counting)
}

/// Returns the eigenvalue of `u` on `v`, or a validation error if `v` is not an eigenvector.
pub fn eigenvalue(u: &Matrix, v: &StateVector) -> Result<Complex64> {
    if u.rows() != v.dim() {
        return Err(Error::Argument(format!(
            "operator dimension {} vs state {}",
            u.rows(),
            v.dim()
        )));
    }
    let uv = u.mul_vec(v.amplitudes());
    let lambda: Complex64 = v
        .amplitudes()
        .iter()
        .zip(&uv)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let residual: f64 = uv
        .iter()
        .zip(v.amplitudes())
        .map(|(b, a)| (b - lambda * a).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > EIGEN_TOLERANCE {
        return Err(Error::Validation(format!(
            "not an eigenstate: residual {residual:.3e}"
        )));
    }
    Ok(lambda)
}

/// Estimates the phase `ω` of `U|u⟩ = e^{2πiω}|u⟩` to `m` bits with failure probability `epsilon`.
pub fn phase_estimate<R: Rng + ?Sized>(
    u: &Matrix,
    eigenstate: &StateVector,
    m: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<PhaseEstimate> {
    let t = counting_qubits(m, epsilon)?;
    eigenvalue(u, eigenstate)?;
    let powers = UnitaryPowers::by_squaring(u, t)?;
    let dist = phase_distribution(&powers, eigenstate, t)?;
    let j = sample_index(&dist, rng);
    Ok(PhaseEstimate {
        phase: j as f64 / (1u64 << t) as f64,
        outcome: j,
        precision_bits: m,
        t_register: t,
        confidence: 1.0 - epsilon,
        probability: dist[j],
    })
}

/// Distance between two phases on the unit circle.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use std::f64::consts::PI;

    fn phase_gate(omega: f64) -> Matrix {
        Matrix::diagonal(&[
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, 2.0 * PI * omega),
        ])
    }

    fn one() -> StateVector {
        StateVector::basis(1, 1).unwrap()
    }

    #[test]
    fn register_width_formula() {
        // 1/(2·0.1) = 5, log2(7) ≈ 2.81 → 3
        assert_eq!(counting_qubits(4, 0.1).unwrap(), 7);
        // 1/(2·0.25) = 2, log2(4) = 2
        assert_eq!(counting_qubits(3, 0.25).unwrap(), 5);
        assert!(counting_qubits(3, 0.0).is_err());
        assert!(counting_qubits(0, 0.1).is_err());
    }

    #[test]
    fn pi8_phase_is_exact() {
        let pi8 = GateSpec::pi8(0).matrix();
        let t = counting_qubits(3, 0.1).unwrap();
        let dist =
            phase_distribution(&UnitaryPowers::by_squaring(&pi8, t).unwrap(), &one(), t).unwrap();
        let target = (1usize << t) / 8;
        assert!((dist[target] - 1.0).abs() < 1e-9);
        let est = phase_estimate(&pi8, &one(), 3, 0.1, &mut seeded(5)).unwrap();
        assert!((est.phase - 0.125).abs() < 1e-12);
    }

    #[test]
    fn identity_phase_is_zero() {
        let id = Matrix::identity(2);
        let est = phase_estimate(&id, &one(), 3, 0.1, &mut seeded(1)).unwrap();
        assert_eq!(est.phase, 0.0);
    }

    #[test]
    fn one_third_within_guarantee() {
        let (m, eps, omega) = (4, 0.1, 1.0 / 3.0);
        let t = counting_qubits(m, eps).unwrap();
        let dist = phase_distribution(
            &UnitaryPowers::by_squaring(&phase_gate(omega), t).unwrap(),
            &one(),
            t,
        )
        .unwrap();
        let good: f64 = dist
            .iter()
            .enumerate()
            .filter(|(j, _)| {
                circular_distance(*j as f64 / (1u64 << t) as f64, omega) <= 0.5f64.powi(m as i32)
            })
            .map(|(_, p)| p)
            .sum();
        assert!(good >= 1.0 - eps, "{good}");
    }

    #[test]
    fn non_eigenstate_rejected() {
        let plus = {
            let mut s = StateVector::new(1).unwrap();
            s.apply_gate(&GateSpec::h(0)).unwrap();
            s
        };
        let r = phase_estimate(&GateSpec::pi8(0).matrix(), &plus, 3, 0.1, &mut seeded(0));
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn powers_by_squaring() {
        let u = phase_gate(0.1);
        let p = UnitaryPowers::by_squaring(&u, 4).unwrap();
        for j in 0..4 {
            let expect = phase_gate(0.1 * (1 << j) as f64);
            assert!(p.power(j).max_abs_diff(&expect) < 1e-12);
        }
    }

    #[test]
    fn circular_distance_wraps() {
        assert!((circular_distance(0.95, 0.05) - 0.1).abs() < 1e-12);
        assert!((circular_distance(0.2, 0.5) - 0.3).abs() < 1e-12);
    }
}
