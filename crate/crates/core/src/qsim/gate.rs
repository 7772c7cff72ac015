use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use super::matrix::Matrix;
use crate::error::{Error, Result};

/// Tolerance for the unitarity check on explicit matrices.
pub const UNITARY_TOLERANCE: f64 = 1e-9;

/// The operator part of a gate.
#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    H,
    X,
    /// Controlled-NOT; first target is the control.
    Cnot,
    /// `diag(1, e^{iπ/4})`.
    Pi8,
    /// `diag(1, e^{iφ})`.
    Phase(f64),
    Swap,
    /// `2|0…0⟩⟨0…0| − I` over all of its targets.
    PhaseFlipAboutZero,
    /// Validated unitary acting on `log2(dim)` targets.
    Explicit(Matrix),
    /// `inner` applied when all `controls` leading targets are |1⟩.
    Controlled {
        inner: Box<GateKind>,
        controls: usize,
    },
}

/// A gate together with the qubits it acts on.
///
/// For controlled gates the control qubits come first in `targets`.
#[derive(Clone, Debug, PartialEq)]
pub struct GateSpec {
    kind: GateKind,
    targets: Vec<usize>,
}

impl GateSpec {
    pub fn new(kind: GateKind, targets: Vec<usize>) -> Result<Self> {
        if let GateKind::Explicit(m) = &kind {
            validate_unitary(m)?;
        }
        let arity = kind.arity(targets.len())?;
        if arity != targets.len() {
            return Err(Error::Argument(format!(
                "gate expects {arity} targets, got {}",
                targets.len()
            )));
        }
        let mut seen = targets.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != targets.len() {
            return Err(Error::Argument(format!(
                "duplicate gate targets {targets:?}"
            )));
        }
        Ok(GateSpec { kind, targets })
    }

    pub fn h(q: usize) -> Self {
        GateSpec {
            kind: GateKind::H,
            targets: vec![q],
        }
    }

    pub fn x(q: usize) -> Self {
        GateSpec {
            kind: GateKind::X,
            targets: vec![q],
        }
    }

    pub fn pi8(q: usize) -> Self {
        GateSpec {
            kind: GateKind::Pi8,
            targets: vec![q],
        }
    }

    pub fn phase(q: usize, angle: f64) -> Self {
        GateSpec {
            kind: GateKind::Phase(angle),
            targets: vec![q],
        }
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Cnot, vec![control, target])
    }

    pub fn swap(a: usize, b: usize) -> Result<Self> {
        Self::new(GateKind::Swap, vec![a, b])
    }

    pub fn phase_flip_about_zero(targets: Vec<usize>) -> Result<Self> {
        Self::new(GateKind::PhaseFlipAboutZero, targets)
    }

    pub fn explicit(matrix: Matrix, targets: Vec<usize>) -> Result<Self> {
        Self::new(GateKind::Explicit(matrix), targets)
    }

    /// Wraps `inner` with `controls` prepended to its targets.
    pub fn controlled(inner: GateSpec, controls: &[usize]) -> Result<Self> {
        let mut targets = controls.to_vec();
        targets.extend_from_slice(&inner.targets);
        Self::new(
            GateKind::Controlled {
                inner: Box::new(inner.kind),
                controls: controls.len(),
            },
            targets,
        )
    }

    pub fn kind(&self) -> &GateKind {
        &self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// The gate's matrix over its own targets (first target most significant).
    pub fn matrix(&self) -> Matrix {
        self.kind.matrix(self.targets.len())
    }

    /// Splits nested controls off, returning `(controls, inner targets, inner kind)`.
    pub(crate) fn flatten(&self) -> (Vec<usize>, Vec<usize>, &GateKind) {
        let mut kind = &self.kind;
        let mut taken = 0;
        while let GateKind::Controlled { inner, controls } = kind {
            taken += controls;
            kind = inner;
        }
        let mut controls = self.targets[..taken].to_vec();
        let mut targets = self.targets[taken..].to_vec();
        if let GateKind::Cnot = kind {
            controls.push(targets[0]);
            targets.remove(0);
            return (controls, targets, &GateKind::X);
        }
        (controls, targets, kind)
    }
}

impl GateKind {
    /// Number of qubits the gate acts on when given `requested` targets.
    fn arity(&self, requested: usize) -> Result<usize> {
        Ok(match self {
            GateKind::H | GateKind::X | GateKind::Pi8 | GateKind::Phase(_) => 1,
            GateKind::Cnot | GateKind::Swap => 2,
            GateKind::PhaseFlipAboutZero => {
                if requested == 0 {
                    return Err(Error::Argument(
                        "phase flip needs at least one target".into(),
                    ));
                }
                requested
            }
            GateKind::Explicit(m) => matrix_qubits(m)?,
            GateKind::Controlled { inner, controls } => {
                if *controls == 0 {
                    return Err(Error::Argument("controlled gate needs a control".into()));
                }
                let rest = requested
                    .checked_sub(*controls)
                    .ok_or_else(|| Error::Argument("fewer targets than controls".into()))?;
                controls + inner.arity(rest)?
            }
        })
    }

    fn matrix(&self, width: usize) -> Matrix {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match self {
            GateKind::H => {
                Matrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0].map(|v| v * FRAC_1_SQRT_2))
            }
            GateKind::X => Matrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]),
            GateKind::Pi8 => {
                Matrix::diagonal(&[c(1.0, 0.0), Complex64::from_polar(1.0, FRAC_PI_4)])
            }
            GateKind::Phase(a) => Matrix::diagonal(&[c(1.0, 0.0), Complex64::from_polar(1.0, *a)]),
            GateKind::Cnot => Matrix::from_real(
                4,
                4,
                &[
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 1.0, 0.0, 0.0, //
                    0.0, 0.0, 0.0, 1.0, //
                    0.0, 0.0, 1.0, 0.0,
                ],
            ),
            GateKind::Swap => Matrix::from_real(
                4,
                4,
                &[
                    1.0, 0.0, 0.0, 0.0, //
                    0.0, 0.0, 1.0, 0.0, //
                    0.0, 1.0, 0.0, 0.0, //
                    0.0, 0.0, 0.0, 1.0,
                ],
            ),
            GateKind::PhaseFlipAboutZero => {
                let dim = 1usize << width;
                let mut diag = vec![c(-1.0, 0.0); dim];
                diag[0] = c(1.0, 0.0);
                Matrix::diagonal(&diag)
            }
            GateKind::Explicit(m) => m.clone(),
            GateKind::Controlled { inner, controls } => {
                let inner_m = inner.matrix(width - controls);
                let d_in = inner_m.rows();
                let dim = d_in << controls;
                let mut m = Matrix::identity(dim);
                let off = dim - d_in;
                for r in 0..d_in {
                    for col in 0..d_in {
                        m.set(off + r, off + col, inner_m.get(r, col));
                    }
                }
                m
            }
        }
    }
}

fn matrix_qubits(m: &Matrix) -> Result<usize> {
    let d = m.rows();
    if !m.is_square() || d < 2 || !d.is_power_of_two() {
        return Err(Error::Validation(format!(
            "explicit gate must be a square power-of-two matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(d.trailing_zeros() as usize)
}

pub fn validate_unitary(m: &Matrix) -> Result<()> {
    matrix_qubits(m)?;
    let defect = m.unitarity_defect();
    if defect > UNITARY_TOLERANCE {
        return Err(Error::Validation(format!(
            "matrix is not unitary: max |UU† - I| = {defect:e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_matrices_are_unitary() {
        let gates = [
            GateSpec::h(0),
            GateSpec::x(0),
            GateSpec::pi8(0),
            GateSpec::phase(0, 1.234),
            GateSpec::cnot(0, 1).unwrap(),
            GateSpec::swap(0, 1).unwrap(),
            GateSpec::phase_flip_about_zero(vec![0, 1, 2]).unwrap(),
            GateSpec::controlled(GateSpec::h(2), &[0, 1]).unwrap(),
        ];
        for g in &gates {
            assert!(g.matrix().unitarity_defect() < 1e-12, "{g:?}");
        }
    }

    #[test]
    fn explicit_rejects_non_unitary() {
        let m = Matrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!(matches!(
            GateSpec::explicit(m, vec![0]),
            Err(Error::Validation(_))
        ));
        let bad_shape = Matrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(GateSpec::explicit(bad_shape, vec![0]).is_err());
    }

    #[test]
    fn duplicate_targets_rejected() {
        assert!(GateSpec::cnot(1, 1).is_err());
    }

    #[test]
    fn controlled_x_matches_cnot() {
        let cx = GateSpec::controlled(GateSpec::x(1), &[0]).unwrap();
        assert_eq!(cx.matrix(), GateSpec::cnot(0, 1).unwrap().matrix());
    }
}
