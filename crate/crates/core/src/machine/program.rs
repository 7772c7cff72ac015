use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub fn parse_bits(text: &str) -> Result<Vec<bool>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("'{other}' is not a bit"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Bits of `value` as an `n`-bit string, first bit most significant.
pub fn bits_of(value: usize, n: usize) -> Vec<bool> {
    (0..n).map(|j| value >> (n - 1 - j) & 1 == 1).collect()
}

pub fn value_of(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
}

pub(crate) fn serialize_bits<S: Serializer>(
    bits: &[bool],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_bits(bits))
}

/// A binary program.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Program(Vec<bool>);

impl Program {
    pub fn new(bits: Vec<bool>) -> Self {
        Program(bits)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Program(parse_bits(text.trim())?))
    }

    /// The `index`-th program of length `n` in lexicographic order.
    pub fn nth_of_length(index: usize, n: usize) -> Self {
        Program(bits_of(index, n))
    }

    /// All programs of length `n`, lexicographic.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = Program> {
        (0..1usize << n).map(move |i| Program::nth_of_length(i, n))
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, len: usize) -> Program {
        Program(self.0[..len].to_vec())
    }

    pub fn concat(&self, tail: &[bool]) -> Program {
        let mut bits = self.0.clone();
        bits.extend_from_slice(tail);
        Program(bits)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bits(&self.0))
    }
}

impl Serialize for Program {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_bits(&self.0, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let p = Program::parse("0101\n").unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.to_string(), "0101");
        assert!(Program::parse("01a").is_err());
        assert_eq!(Program::parse("").unwrap(), Program::default());
    }

    #[test]
    fn enumeration_order() {
        let all: Vec<String> = Program::all_of_length(2).map(|p| p.to_string()).collect();
        assert_eq!(all, ["00", "01", "10", "11"]);
        assert_eq!(value_of(&bits_of(13, 5)), 13);
    }
}
