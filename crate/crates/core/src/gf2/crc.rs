use std::str::FromStr;

use super::lfsr::{serial_shift_word, BitConvention, LfsrState};
use super::network::derive_network;
use super::poly::GeneratorPolynomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// One clock of the LFSR per message bit.
    Serial,
    /// One application of the derived 8-shift network per message byte.
    Parallel,
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "serial" => Ok(Engine::Serial),
            "parallel" => Ok(Engine::Parallel),
            other => Err(Error::InvalidCircuit(format!("unknown engine `{other}`"))),
        }
    }
}

/// Remainder register after feeding every bit of `message` through the
/// division circuit, starting from `init`. Bytes enter in order, each
/// least-significant bit first (the canonical convention).
pub fn crc_compute(message: &[u8], poly: &GeneratorPolynomial, init: LfsrState, engine: Engine) -> Result<LfsrState> {
    init.check_width(poly.width())?;
    let conv = BitConvention::CANONICAL;
    match engine {
        Engine::Serial => message.iter().try_fold(init, |state, &byte| {
            serial_shift_word(state, poly, u64::from(byte), 8, conv)
        }),
        Engine::Parallel => derive_network(poly, 8, conv)?.apply_bytes(init, message),
    }
}
