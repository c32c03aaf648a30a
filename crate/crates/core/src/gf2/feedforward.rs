//! Feed-forward binary circuits: a tapped delay line that multiplies the
//! input stream by `T(D) = sum taps_j D^j` over GF(2).
//!
//! Bit sequences are coefficient vectors indexed by power of `D`; element 0
//! enters the circuit first.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedForwardCircuit {
    taps: Vec<bool>,
}

impl FeedForwardCircuit {
    /// `taps[j]` is the coefficient of `D^j`; the circuit has
    /// `taps.len() - 1` delay stages.
    pub fn new(taps: Vec<bool>) -> Result<Self> {
        if !taps.iter().any(|&t| t) {
            return Err(Error::InvalidCircuit("at least one tap must be set".into()));
        }
        Ok(Self { taps })
    }

    /// `1 + D + ... + D^stages`.
    pub fn all_taps(stages: usize) -> Self {
        Self {
            taps: vec![true; stages + 1],
        }
    }

    pub fn taps(&self) -> &[bool] {
        &self.taps
    }

    /// Number of delay stages `N`.
    pub fn stages(&self) -> usize {
        self.taps.len() - 1
    }
}

/// Clock `input` through the delay line, then flush it with zeros.
/// `y_k = XOR_j taps_j * x_(k-j)`, output length `len(input) + N`.
pub fn feedforward_encode(input: &[bool], circuit: &FeedForwardCircuit) -> Result<Vec<bool>> {
    if input.is_empty() {
        return Err(Error::EmptyInput);
    }
    let stages = circuit.stages();
    // delay[j] holds x_(k-j) during clock k.
    let mut delay = vec![false; stages + 1];
    let mut out = Vec::with_capacity(input.len() + stages);
    for k in 0..input.len() + stages {
        delay.rotate_right(1);
        delay[0] = input.get(k).copied().unwrap_or(false);
        let y = delay
            .iter()
            .zip(&circuit.taps)
            .fold(false, |acc, (&x, &t)| acc ^ (x & t));
        out.push(y);
    }
    Ok(out)
}

/// Parse a polynomial written highest power first, e.g. `11001` for
/// `D^4 + D^3 + 1`.
pub fn parse_poly_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .rev()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidBitString(s.to_string())),
        })
        .collect()
}

/// Inverse of [`parse_poly_bits`]; trailing (highest-power) zeros are kept.
pub fn format_poly_bits(bits: &[bool]) -> String {
    bits.iter().rev().map(|&b| if b { '1' } else { '0' }).collect()
}
