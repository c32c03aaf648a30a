//! Exhaustive network-versus-serial equivalence over every (state, byte) pair.

use rayon::prelude::*;
use serde::Serialize;

use super::lfsr::{BitConvention, SerialCircuit};
use super::network::derive_network;
use super::poly::GeneratorPolynomial;
use crate::error::{Error, Result};

/// Widest register the exhaustive sweep accepts (2^24 states x 256 bytes).
pub const MAX_EXHAUSTIVE_WIDTH: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub state: u64,
    pub data: u8,
    pub serial: u64,
    pub network: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustiveReport {
    pub poly: String,
    pub cases: u64,
    pub passed: u64,
    /// Up to the first 16 mismatches, ordered by (state, data).
    pub mismatches: Vec<Mismatch>,
}

impl ExhaustiveReport {
    pub fn is_pass(&self) -> bool {
        self.passed == self.cases
    }
}

impl std::fmt::Display for ExhaustiveReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}/{} cases pass", self.poly, self.passed, self.cases)
    }
}

/// Compare the derived 8-shift network against eight serial clocks for
/// every register state and every data byte.
///
/// The state space is sharded by its top bits; shard results are merged in
/// shard order so the report is independent of scheduling.
pub fn exhaustive_equivalence(poly: &GeneratorPolynomial) -> Result<ExhaustiveReport> {
    let width = poly.width();
    if width > MAX_EXHAUSTIVE_WIDTH {
        return Err(Error::InvalidPolynomial(format!(
            "exhaustive sweep limited to {MAX_EXHAUSTIVE_WIDTH}-bit registers, got {width}"
        )));
    }
    let conv = BitConvention::CANONICAL;
    let net = derive_network(poly, 8, conv)?;
    let circuit = SerialCircuit::new(poly, conv);
    let states = 1u64 << width;
    let shard_bits = width.min(8);
    let shard_len = states >> shard_bits;

    let shards: Vec<(u64, Vec<Mismatch>)> = (0..1u64 << shard_bits)
        .into_par_iter()
        .map(|shard| {
            let mut failed = 0u64;
            let mut found = Vec::new();
            for state in shard * shard_len..(shard + 1) * shard_len {
                for data in 0..=255u8 {
                    let serial = (0..8).fold(state, |s, t| circuit.clock(s, u64::from(data >> t)));
                    let network = net.apply_bits(state, u64::from(data));
                    if serial != network {
                        failed += 1;
                        if found.len() < 16 {
                            found.push(Mismatch {
                                state,
                                data,
                                serial,
                                network,
                            });
                        }
                    }
                }
            }
            (failed, found)
        })
        .collect();

    let cases = states * 256;
    let failed: u64 = shards.iter().map(|(f, _)| f).sum();
    let mismatches = shards.into_iter().flat_map(|(_, m)| m).take(16).collect();
    Ok(ExhaustiveReport {
        poly: poly.to_string(),
        cases,
        passed: cases - failed,
        mismatches,
    })
}
