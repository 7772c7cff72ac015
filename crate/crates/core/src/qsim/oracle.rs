use crate::error::{Error, Result};

/// Total boolean function on `arity`-bit inputs, stored as a truth table.
///
/// Input `x` is read with the first oracle input qubit as its most significant bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Oracle {
    arity: usize,
    table: Vec<bool>,
}

const MAX_ORACLE_ARITY: usize = 24;

impl Oracle {
    pub fn new(arity: usize, table: Vec<bool>) -> Result<Self> {
        if arity > MAX_ORACLE_ARITY {
            return Err(Error::Resource(format!(
                "oracle arity {arity} exceeds {MAX_ORACLE_ARITY}"
            )));
        }
        if table.len() != 1 << arity {
            return Err(Error::Argument(format!(
                "truth table for arity {arity} needs {} entries, got {}",
                1usize << arity,
                table.len()
            )));
        }
        Ok(Oracle { arity, table })
    }

    pub fn from_fn(arity: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        Self::new(arity, (0..1usize << arity).map(f).collect())
    }

    pub fn constant(arity: usize, value: bool) -> Result<Self> {
        Self::from_fn(arity, |_| value)
    }

    /// `f(x)` = first (most significant) bit of `x`.
    pub fn balanced_first_bit(arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::Argument(
                "balanced oracle needs at least one input".into(),
            ));
        }
        Self::from_fn(arity, |x| (x >> (arity - 1)) & 1 == 1)
    }

    pub fn marked(arity: usize, marked: &[usize]) -> Result<Self> {
        let mut table = vec![false; 1 << arity];
        for &m in marked {
            *table
                .get_mut(m)
                .ok_or_else(|| Error::Argument(format!("marked input {m} out of range")))? = true;
        }
        Self::new(arity, table)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain_size(&self) -> usize {
        self.table.len()
    }

    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    /// Number of inputs mapped to 1.
    pub fn count_marked(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }

    pub fn marked_inputs(&self) -> Vec<usize> {
        (0..self.table.len()).filter(|&x| self.table[x]).collect()
    }

    /// Parses `input output` lines, inputs as bitstrings of equal width.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut width = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(input), Some(output), None) = (parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::Parse(format!(
                    "line {}: expected `input output`",
                    lineno + 1
                )));
            };
            let x =
                parse_bits(input).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
            if *width.get_or_insert(input.len()) != input.len() {
                return Err(Error::Parse(format!(
                    "line {}: inconsistent input width",
                    lineno + 1
                )));
            }
            let y = match output {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::Parse(format!(
                        "line {}: bad output {other:?}",
                        lineno + 1
                    )))
                }
            };
            entries.push((x, y));
        }
        let arity = width.ok_or_else(|| Error::Parse("empty oracle table".into()))?;
        let mut table = vec![None; 1 << arity];
        for (x, y) in entries {
            if table[x].replace(y).is_some() {
                return Err(Error::Parse(format!("duplicate entry for input {x}")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(x, v)| v.ok_or_else(|| Error::Parse(format!("missing entry for input {x}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(arity, table)
    }
}

fn parse_bits(s: &str) -> std::result::Result<usize, String> {
    if s.is_empty() || s.len() > MAX_ORACLE_ARITY || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(format!("bad bitstring {s:?}"));
    }
    usize::from_str_radix(s, 2).map_err(|e| e.to_string())
}
