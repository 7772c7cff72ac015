use crate::error::{Error, Result};
use crate::machine::{emit_time, phase_budget, Machine, Program};
use crate::qsim::Oracle;

/// Truth tables of the phase oracles `f_1 … f_{n²}` over programs of length `n`.
///
/// `tables[i − 1]` marks the programs `p` with `p‖y →_i y‖x` (plain `p →_i x` when `y` is empty).
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseOracles {
    pub n: usize,
    pub tables: Vec<Oracle>,
}

impl PhaseOracles {
    pub fn phases(&self) -> usize {
        self.tables.len()
    }

    /// `|{p : f_i(p) = 1}|` per phase.
    pub fn counts(&self) -> Vec<usize> {
        self.tables.iter().map(Oracle::count_marked).collect()
    }
}

/// Builds the phase tables from one emit-time run per program prefix.
///
/// `p →_i x` holds iff `emit(p) ≤ ⌊2^{i−ℓ(p)}⌋` and every proper prefix `p'`
/// has `emit(p') > ⌊2^{i−ℓ(p')}⌋`; emit times do not depend on `i`.
pub fn phase_oracles(
    machine: &dyn Machine,
    x: &[bool],
    context: &[bool],
    cap: usize,
) -> Result<PhaseOracles> {
    let n = x.len();
    if n == 0 {
        return Err(Error::Argument(
            "phase oracles need a non-empty target".into(),
        ));
    }
    if n > cap {
        return Err(Error::Resource(format!(
            "ℓ(x) = {n} exceeds the enumeration cap {cap}"
        )));
    }
    let phases = n * n;
    let limit = phase_budget(1, phases);
    let mut want = context.to_vec();
    want.extend_from_slice(x);

    // emits[len][v]: emit time of the length-`len` program with value `v`, context appended
    let mut emits: Vec<Vec<Option<u64>>> = vec![Vec::new()];
    for len in 1..=n {
        let row = Program::all_of_length(len)
            .map(|p| emit_time(machine, p.concat(context).bits(), &want, limit))
            .collect();
        emits.push(row);
    }

    let mut tables = Vec::with_capacity(phases);
    for i in 1..=phases {
        let within =
            |len: usize, v: usize| emits[len][v].is_some_and(|t| t <= phase_budget(len, i));
        let table = (0..1usize << n)
            .map(|v| within(n, v) && !(1..n).any(|len| within(len, v >> (n - len))))
            .collect();
        tables.push(Oracle::new(n, table)?);
    }
    Ok(PhaseOracles { n, tables })
}
