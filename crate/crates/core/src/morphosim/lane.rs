//! Cell value types.
//!
//! The RC array only ever XORs, so the simulator is generic over any value
//! with an XOR and a zero. Two instantiations matter:
//!
//! * `u8`: one byte per cell, bit `k` belonging to channel `k`, so a single
//!   run evaluates up to eight independent channels at once.
//! * [`LinearForm`]: a symbolic GF(2) combination of the `DataIn_i` and
//!   `Register_j` inputs, used to print array contents by name and to prove
//!   a program computes a given network for every input at once.

use std::fmt::Debug;
use std::hash::Hash;
use std::ops::{Add, BitXor};

use num_traits::Zero;

pub use crate::gf2::network::LinearForm;
use crate::gf2::network::{factor, join_terms};

pub trait Lane: Copy + Eq + Hash + Debug + Zero + BitXor<Output = Self> + Send + Sync + 'static {
    /// Whether [`Lane::render`] always fits in two characters.
    const COMPACT: bool;

    fn render(&self) -> String;
}

impl Lane for u8 {
    const COMPACT: bool = true;

    fn render(&self) -> String {
        format!("{self:02x}")
    }
}

// GF(2) addition is XOR; this is what lets `LinearForm` satisfy `Zero`.
impl Add for LinearForm {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Self) -> Self {
        self ^ rhs
    }
}

impl Zero for LinearForm {
    fn zero() -> Self {
        LinearForm::default()
    }

    fn is_zero(&self) -> bool {
        self.registers == 0 && self.data == 0
    }
}

/// Number of `XOR_i` subexpressions factored when rendering symbolic cells.
const DATA_BITS: u32 = 8;

impl Lane for LinearForm {
    const COMPACT: bool = false;

    fn render(&self) -> String {
        join_terms(&factor(*self, DATA_BITS))
    }
}

/// Pack one bit from each channel into a lane byte: bit `k` of the result is
/// `bit` of `values[k]`.
pub fn pack_channels(values: &[u64], bit: u32) -> u8 {
    values
        .iter()
        .enumerate()
        .fold(0u8, |acc, (k, v)| acc | ((((v >> bit) & 1) as u8) << k))
}

/// Inverse of [`pack_channels`] for one channel across a run of lane bytes:
/// bit `i` of the result is bit `channel` of `lanes[i]`.
pub fn unpack_channel(lanes: &[u8], channel: usize) -> u64 {
    lanes
        .iter()
        .enumerate()
        .fold(0u64, |acc, (i, &b)| acc | (u64::from((b >> channel) & 1) << i))
}
