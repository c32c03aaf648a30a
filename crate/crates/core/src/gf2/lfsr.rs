//! Serial LFSR division circuit.
//!
//! The register is held as a bitmask: bit `i` of [`LfsrState::bits`] is
//! `Register_i`. Which physical stage `Register_0` names, and which data bit
//! enters first, is fixed by a [`BitConvention`].

use serde::{Deserialize, Serialize};

use super::poly::{low_mask, GeneratorPolynomial};
use crate::error::{Error, Result};

/// Which end of the shift register carries index 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegisterOrder {
    /// `Register_0` is the stage fed by the `x^0` tap; feedback is taken
    /// from `Register_{w-1}`.
    InputStageFirst,
    /// `Register_0` is the stage the feedback is taken from; the `x^0` tap
    /// feeds `Register_{w-1}`.
    OutputStageFirst,
}

/// Order in which the bits of a data word enter the circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataBitOrder {
    MsbFirst,
    LsbFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitConvention {
    pub register_order: RegisterOrder,
    pub data_bit_order: DataBitOrder,
}

impl BitConvention {
    /// The convention under which the derived 8-shift CCITT network matches
    /// the published byte-wise equations term for term. Confirmed unique by
    /// [`super::audit::discover_conventions`].
    pub const CANONICAL: Self = Self {
        register_order: RegisterOrder::OutputStageFirst,
        data_bit_order: DataBitOrder::LsbFirst,
    };

    pub const ALL: [Self; 4] = [
        Self {
            register_order: RegisterOrder::InputStageFirst,
            data_bit_order: DataBitOrder::MsbFirst,
        },
        Self {
            register_order: RegisterOrder::InputStageFirst,
            data_bit_order: DataBitOrder::LsbFirst,
        },
        Self {
            register_order: RegisterOrder::OutputStageFirst,
            data_bit_order: DataBitOrder::MsbFirst,
        },
        Self {
            register_order: RegisterOrder::OutputStageFirst,
            data_bit_order: DataBitOrder::LsbFirst,
        },
    ];

    /// Index (within a `step_bits`-wide data word) of the bit entering on
    /// shift `t`.
    pub fn data_bit_at(&self, t: u32, step_bits: u32) -> u32 {
        match self.data_bit_order {
            DataBitOrder::LsbFirst => t,
            DataBitOrder::MsbFirst => step_bits - 1 - t,
        }
    }
}

impl Default for BitConvention {
    fn default() -> Self {
        Self::CANONICAL
    }
}

impl std::fmt::Display for BitConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let reg = match self.register_order {
            RegisterOrder::InputStageFirst => "index0-is-input-stage",
            RegisterOrder::OutputStageFirst => "index0-is-output-stage",
        };
        let data = match self.data_bit_order {
            DataBitOrder::MsbFirst => "msb-first",
            DataBitOrder::LsbFirst => "lsb-first",
        };
        write!(f, "{reg}/{data}")
    }
}

/// The `width`-bit register vector of the serial circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LfsrState {
    width: u32,
    bits: u64,
}

impl LfsrState {
    pub fn zero(width: u32) -> Self {
        Self { width, bits: 0 }
    }

    pub fn ones(width: u32) -> Self {
        Self {
            width,
            bits: low_mask(width),
        }
    }

    pub fn from_bits(width: u32, bits: u64) -> Result<Self> {
        if width == 0 || width > 64 {
            return Err(Error::WidthMismatch {
                expected: 64,
                actual: width,
            });
        }
        if bits & !low_mask(width) != 0 {
            return Err(Error::WidthMismatch {
                expected: width,
                actual: 64 - bits.leading_zeros(),
            });
        }
        Ok(Self { width, bits })
    }

    pub fn from_slice(registers: &[bool]) -> Result<Self> {
        let bits = registers
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
        Self::from_bits(registers.len() as u32, bits)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn register(&self, index: u32) -> bool {
        (self.bits >> index) & 1 == 1
    }

    pub fn registers(&self) -> Vec<bool> {
        (0..self.width).map(|i| self.register(i)).collect()
    }

    pub(crate) fn check_width(&self, width: u32) -> Result<()> {
        if self.width != width {
            return Err(Error::WidthMismatch {
                expected: width,
                actual: self.width,
            });
        }
        Ok(())
    }
}

/// Bit-reversed tap mask: bit `i` set iff the coefficient of `x^(w-1-i)` is one.
pub(crate) fn reflected_taps(poly: &GeneratorPolynomial) -> u64 {
    let w = poly.width();
    (0..w)
        .filter(|&i| poly.coefficient(w - 1 - i))
        .fold(0u64, |acc, i| acc | (1 << i))
}

/// Precomputed single-bit clock for one (polynomial, convention) pair.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SerialCircuit {
    width: u32,
    mask: u64,
    feedback_taps: u64,
    order: RegisterOrder,
}

impl SerialCircuit {
    pub(crate) fn new(poly: &GeneratorPolynomial, conv: BitConvention) -> Self {
        let feedback_taps = match conv.register_order {
            RegisterOrder::InputStageFirst => poly.taps(),
            RegisterOrder::OutputStageFirst => reflected_taps(poly),
        };
        Self {
            width: poly.width(),
            mask: poly.register_mask(),
            feedback_taps,
            order: conv.register_order,
        }
    }

    #[inline]
    pub(crate) fn clock(&self, bits: u64, input: u64) -> u64 {
        match self.order {
            RegisterOrder::OutputStageFirst => {
                let feedback = (bits ^ input) & 1;
                (bits >> 1) ^ (self.feedback_taps & feedback.wrapping_neg())
            }
            RegisterOrder::InputStageFirst => {
                let feedback = ((bits >> (self.width - 1)) ^ input) & 1;
                ((bits << 1) & self.mask) ^ (self.feedback_taps & feedback.wrapping_neg())
            }
        }
    }
}

/// One clock of the serial circuit: the incoming bit XOR the feedback bit
/// drives every tap position while the register shifts one stage.
pub fn serial_shift(state: LfsrState, poly: &GeneratorPolynomial, bit: bool, conv: BitConvention) -> Result<LfsrState> {
    state.check_width(poly.width())?;
    let bits = SerialCircuit::new(poly, conv).clock(state.bits, u64::from(bit));
    Ok(LfsrState {
        width: state.width,
        bits,
    })
}

/// `step_bits` consecutive clocks feeding the bits of `data` in the order
/// set by `conv`.
pub fn serial_shift_word(
    state: LfsrState,
    poly: &GeneratorPolynomial,
    data: u64,
    step_bits: u32,
    conv: BitConvention,
) -> Result<LfsrState> {
    state.check_width(poly.width())?;
    if step_bits > 64 || (step_bits < 64 && data >> step_bits != 0) {
        return Err(Error::StepMismatch {
            expected: step_bits,
            actual: 64 - data.leading_zeros(),
        });
    }
    let circuit = SerialCircuit::new(poly, conv);
    let bits = (0..step_bits).fold(state.bits, |bits, t| {
        circuit.clock(bits, (data >> conv.data_bit_at(t, step_bits)) & 1)
    });
    Ok(LfsrState {
        width: state.width,
        bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ccitt() -> GeneratorPolynomial {
        GeneratorPolynomial::ccitt()
    }

    #[test]
    fn zero_is_a_fixed_point() {
        for poly in GeneratorPolynomial::catalogue() {
            for conv in BitConvention::ALL {
                let s = serial_shift(LfsrState::zero(poly.width()), &poly, false, conv).unwrap();
                assert_eq!(s.bits(), 0);
            }
        }
    }

    #[test]
    fn single_one_bit_lands_on_tap_positions() {
        // Hand-clocked: feedback 1 enters x^0 (Register_15), x^5 (Register_10)
        // and x^12 (Register_3).
        let s = serial_shift(LfsrState::zero(16), &ccitt(), true, BitConvention::CANONICAL).unwrap();
        let set: Vec<u32> = (0..16).filter(|&i| s.register(i)).collect();
        assert_eq!(set, vec![3, 10, 15]);
        assert_eq!(s.bits(), 0x8408);

        let input_first = BitConvention {
            register_order: RegisterOrder::InputStageFirst,
            data_bit_order: DataBitOrder::MsbFirst,
        };
        let s = serial_shift(LfsrState::zero(16), &ccitt(), true, input_first).unwrap();
        assert_eq!(s.bits(), 0x1021);
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let err = serial_shift(LfsrState::zero(12), &ccitt(), true, BitConvention::CANONICAL);
        assert_eq!(
            err,
            Err(Error::WidthMismatch {
                expected: 16,
                actual: 12
            })
        );
    }

    #[test]
    fn state_constructors_validate() {
        assert!(LfsrState::from_bits(16, 0x1_0000).is_err());
        assert!(LfsrState::from_bits(0, 0).is_err());
        let s = LfsrState::from_slice(&[true, false, true]).unwrap();
        assert_eq!((s.width(), s.bits()), (3, 0b101));
        assert_eq!(s.registers(), vec![true, false, true]);
        assert_eq!(LfsrState::ones(32).bits(), 0xffff_ffff);
    }

    #[test]
    fn word_shift_respects_data_order() {
        let poly = ccitt();
        let state = LfsrState::from_bits(16, 0xbeef).unwrap();
        for conv in BitConvention::ALL {
            let mut s = state;
            for t in 0..8 {
                let bit = (0xa5u64 >> conv.data_bit_at(t, 8)) & 1 == 1;
                s = serial_shift(s, &poly, bit, conv).unwrap();
            }
            assert_eq!(serial_shift_word(state, &poly, 0xa5, 8, conv).unwrap(), s);
        }
        assert!(serial_shift_word(state, &poly, 0x100, 8, BitConvention::CANONICAL).is_err());
    }
}
