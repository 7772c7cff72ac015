use serde::Serialize;

use crate::error::{Error, Result};
use crate::machine::bits_of;

/// Action and observation alphabets with their fixed block width.
///
/// An action occupies `width` bits; a percept is the observation in
/// `width − 1` bits followed by the reward bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Alphabets {
    pub actions: usize,
    pub observations: usize,
    pub width: usize,
}

impl Alphabets {
    pub fn new(actions: usize, observations: usize, width: usize) -> Result<Self> {
        if actions == 0 || observations == 0 {
            return Err(Error::Argument("alphabets must be non-empty".into()));
        }
        if width < 2 || width > 16 {
            return Err(Error::Argument(format!(
                "block width {width} must lie in 2..=16"
            )));
        }
        if actions > 1 << width || observations > 1 << (width - 1) {
            return Err(Error::Argument(format!(
                "{actions} actions / {observations} observations do not fit {width}-bit blocks"
            )));
        }
        Ok(Alphabets {
            actions,
            observations,
            width,
        })
    }

    /// Binary actions and observations in 2-bit blocks.
    pub fn binary() -> Self {
        Alphabets {
            actions: 2,
            observations: 2,
            width: 2,
        }
    }

    pub fn encode_action(&self, a: usize) -> Vec<bool> {
        bits_of(a, self.width)
    }

    pub fn encode_percept(&self, o: usize, r: bool) -> Vec<bool> {
        let mut bits = bits_of(o, self.width - 1);
        bits.push(r);
        bits
    }

    pub fn decode_action(&self, bits: &[bool]) -> Result<usize> {
        let a = self.decode(bits, self.width)?;
        if a >= self.actions {
            return Err(Error::Parse(format!("action code {a} out of range")));
        }
        Ok(a)
    }

    pub fn decode_percept(&self, bits: &[bool]) -> Result<(usize, bool)> {
        if bits.len() != self.width {
            return Err(Error::Parse(format!(
                "percept block has {} bits",
                bits.len()
            )));
        }
        let o = self.decode(&bits[..self.width - 1], self.width - 1)?;
        if o >= self.observations {
            return Err(Error::Parse(format!("observation code {o} out of range")));
        }
        Ok((o, bits[self.width - 1]))
    }

    fn decode(&self, bits: &[bool], width: usize) -> Result<usize> {
        if bits.len() != width {
            return Err(Error::Parse(format!(
                "expected {width} bits, got {}",
                bits.len()
            )));
        }
        Ok(bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b)))
    }

    /// Number of distinct (observation, reward) pairs.
    pub fn percepts(&self) -> usize {
        self.observations * 2
    }

    /// The `j`-th percept in enumeration order: observation major, reward minor.
    pub fn percept(&self, j: usize) -> (usize, bool) {
        (j / 2, j % 2 == 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub action: usize,
    pub observation: usize,
    pub reward: bool,
}

/// Concatenated percept blocks and action blocks of a step sequence.
pub fn encode_steps(alphabets: &Alphabets, steps: &[Step]) -> (Vec<bool>, Vec<bool>) {
    let mut percepts = Vec::with_capacity(steps.len() * alphabets.width);
    let mut actions = Vec::with_capacity(steps.len() * alphabets.width);
    for s in steps {
        percepts.extend(alphabets.encode_percept(s.observation, s.reward));
        actions.extend(alphabets.encode_action(s.action));
    }
    (percepts, actions)
}
