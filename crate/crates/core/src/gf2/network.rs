//! Byte-wise (or word-wise) parallel update equations.
//!
//! A network expresses every register after `step_bits` clocks of the serial
//! circuit as an XOR of terms drawn from the current registers, the incoming
//! data bits and the shared subexpressions `XOR_i = Register_i ^ DataIn_i`.
//! Networks are derived by symbolic simulation, kept in a canonical GF(2)
//! form, and evaluated directly from their term lists.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::lfsr::{BitConvention, DataBitOrder, LfsrState, RegisterOrder};
use super::poly::{low_mask, GeneratorPolynomial};
use crate::error::{Error, Result};

/// Term kinds. Declaration order is the canonical sort order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TermKind {
    #[serde(rename = "reg")]
    Register,
    #[serde(rename = "xor")]
    Xor,
    #[serde(rename = "in")]
    DataIn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Term {
    pub kind: TermKind,
    pub index: u32,
}

impl Term {
    pub const fn reg(index: u32) -> Self {
        Self {
            kind: TermKind::Register,
            index,
        }
    }

    pub const fn xor(index: u32) -> Self {
        Self {
            kind: TermKind::Xor,
            index,
        }
    }

    pub const fn data(index: u32) -> Self {
        Self {
            kind: TermKind::DataIn,
            index,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TermKind::Register => write!(f, "Register_{}", self.index),
            TermKind::Xor => write!(f, "XOR_{}", self.index),
            TermKind::DataIn => write!(f, "DataIn_{}", self.index),
        }
    }
}

impl std::str::FromStr for Term {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (kind, index) = s.split_once('_').ok_or_else(|| format!("unrecognised term `{s}`"))?;
        let index: u32 = index.parse().map_err(|_| format!("bad index in term `{s}`"))?;
        match kind {
            "Register" => Ok(Term::reg(index)),
            "XOR" => Ok(Term::xor(index)),
            "DataIn" => Ok(Term::data(index)),
            _ => Err(format!("unrecognised term `{s}`")),
        }
    }
}

/// A GF(2) linear form over the current registers and the data bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LinearForm {
    pub registers: u64,
    pub data: u64,
}

impl LinearForm {
    /// The form `Register_i`.
    pub fn register(i: u32) -> Self {
        Self {
            registers: 1 << i,
            data: 0,
        }
    }

    /// The form `DataIn_i`.
    pub fn data_bit(i: u32) -> Self {
        Self {
            registers: 0,
            data: 1 << i,
        }
    }

    /// Evaluate on concrete register and data values.
    #[inline]
    pub fn eval(&self, registers: u64, data: u64) -> bool {
        ((self.registers & registers).count_ones() + (self.data & data).count_ones()) & 1 == 1
    }
}

impl std::ops::BitXor for LinearForm {
    type Output = Self;

    fn bitxor(self, rhs: Self) -> Self {
        Self {
            registers: self.registers ^ rhs.registers,
            data: self.data ^ rhs.data,
        }
    }
}

/// Sort terms, cancel duplicate pairs, then factor every co-occurring
/// `Register_i, DataIn_i` pair with `i < xor_count` into `XOR_i`.
pub fn canonicalize(terms: &[Term], xor_count: u32) -> Result<Vec<Term>> {
    Ok(factor(expand(terms, xor_count)?, xor_count))
}

pub(crate) fn expand(terms: &[Term], xor_count: u32) -> Result<LinearForm> {
    terms.iter().try_fold(LinearForm::default(), |acc, t| {
        if t.index >= 64 {
            return Err(Error::Listing {
                line: 0,
                reason: format!("term {t} index out of range"),
            });
        }
        Ok(acc
            ^ match t.kind {
                TermKind::Register => LinearForm::register(t.index),
                TermKind::DataIn => LinearForm::data_bit(t.index),
                TermKind::Xor if t.index < xor_count => LinearForm::register(t.index) ^ LinearForm::data_bit(t.index),
                TermKind::Xor => {
                    return Err(Error::Listing {
                        line: 0,
                        reason: format!("{t} is undefined (XOR_i exists for i < {xor_count})"),
                    })
                }
            })
    })
}

pub(crate) fn factor(form: LinearForm, xor_count: u32) -> Vec<Term> {
    let shared = form.registers & form.data & low_mask(xor_count);
    let bits = |mask: u64| (0..64u32).filter(move |i| (mask >> i) & 1 == 1);
    let mut terms: Vec<Term> = bits(form.registers & !shared).map(Term::reg).collect();
    terms.extend(bits(shared).map(Term::xor));
    terms.extend(bits(form.data & !shared).map(Term::data));
    terms
}

/// Per-register XOR equations for `step_bits` serial shifts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateNetwork {
    width: u32,
    step_bits: u32,
    convention: BitConvention,
    registers: Vec<Vec<Term>>,
}

impl UpdateNetwork {
    /// Build from explicit term lists, canonicalizing each definition.
    pub fn from_terms(step_bits: u32, convention: BitConvention, registers: Vec<Vec<Term>>) -> Result<Self> {
        let width = registers.len() as u32;
        if width == 0 || width > 64 || step_bits > 64 {
            return Err(Error::Listing {
                line: 0,
                reason: format!("unsupported shape: {width} registers, {step_bits} step bits"),
            });
        }
        let xor_count = step_bits.min(width);
        let registers = registers
            .iter()
            .map(|terms| {
                for t in terms {
                    let bound = match t.kind {
                        TermKind::Register => width,
                        TermKind::Xor => xor_count,
                        TermKind::DataIn => step_bits,
                    };
                    if t.index >= bound {
                        return Err(Error::Listing {
                            line: 0,
                            reason: format!("{t} out of range"),
                        });
                    }
                }
                canonicalize(terms, xor_count)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            width,
            step_bits,
            convention,
            registers,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn step_bits(&self) -> u32 {
        self.step_bits
    }

    pub fn convention(&self) -> BitConvention {
        self.convention
    }

    /// Number of shared `XOR_i` subexpressions.
    pub fn xor_count(&self) -> u32 {
        self.step_bits.min(self.width)
    }

    /// `XOR_i = Register_i ^ DataIn_i` for every defined `i`.
    pub fn xor_defs(&self) -> Vec<[Term; 2]> {
        (0..self.xor_count()).map(|i| [Term::reg(i), Term::data(i)]).collect()
    }

    /// Canonical term list of `Register_index'`.
    pub fn register_def(&self, index: usize) -> &[Term] {
        &self.registers[index]
    }

    pub fn register_defs(&self) -> &[Vec<Term>] {
        &self.registers
    }

    /// Each definition expanded to a linear form over (registers, data).
    pub fn linear_forms(&self) -> Vec<LinearForm> {
        self.registers
            .iter()
            .map(|t| expand(t, self.xor_count()).expect("canonical terms are in range"))
            .collect()
    }

    /// The network as a 0/1 matrix: one row per output register, columns
    /// `Register_0..w` followed by `DataIn_0..k`.
    pub fn matrix(&self) -> Vec<Vec<u8>> {
        self.linear_forms()
            .iter()
            .map(|f| {
                (0..self.width)
                    .map(|j| ((f.registers >> j) & 1) as u8)
                    .chain((0..self.step_bits).map(|i| ((f.data >> i) & 1) as u8))
                    .collect()
            })
            .collect()
    }

    /// Evaluate the XOR definitions then every register definition.
    pub fn apply(&self, state: LfsrState, data: u64) -> Result<LfsrState> {
        state.check_width(self.width)?;
        if self.step_bits < 64 && data >> self.step_bits != 0 {
            return Err(Error::StepMismatch {
                expected: self.step_bits,
                actual: 64 - data.leading_zeros(),
            });
        }
        Ok(LfsrState::from_bits(self.width, self.apply_bits(state.bits(), data))
            .expect("network output fits the register width"))
    }

    #[inline]
    pub(crate) fn apply_bits(&self, registers: u64, data: u64) -> u64 {
        let xors = (registers ^ data) & low_mask(self.xor_count());
        let mut out = 0u64;
        for (i, terms) in self.registers.iter().enumerate() {
            let mut bit = 0u64;
            for t in terms {
                let source = match t.kind {
                    TermKind::Register => registers,
                    TermKind::Xor => xors,
                    TermKind::DataIn => data,
                };
                bit ^= source >> t.index;
            }
            out |= (bit & 1) << i;
        }
        out
    }

    /// Fold a byte stream through the network. `step_bits` must be a
    /// multiple of 8 that divides the stream; bytes are packed into words in
    /// arrival order under the network's data bit order.
    pub fn apply_bytes(&self, state: LfsrState, bytes: &[u8]) -> Result<LfsrState> {
        state.check_width(self.width)?;
        let chunk = (self.step_bits / 8) as usize;
        if !self.step_bits.is_multiple_of(8) || chunk == 0 || !bytes.len().is_multiple_of(chunk) {
            return Err(Error::StepMismatch {
                expected: self.step_bits,
                actual: (bytes.len() * 8) as u32,
            });
        }
        let bits = bytes.chunks(chunk).fold(state.bits(), |acc, word| {
            let data = match self.convention.data_bit_order {
                DataBitOrder::LsbFirst => word.iter().rev().fold(0u64, |w, &b| (w << 8) | u64::from(b)),
                DataBitOrder::MsbFirst => word.iter().fold(0u64, |w, &b| (w << 8) | u64::from(b)),
            };
            self.apply_bits(acc, data)
        });
        LfsrState::from_bits(self.width, bits)
    }

    /// Text listing, one definition per line.
    pub fn to_listing(&self) -> String {
        let mut out = String::new();
        for [r, d] in self.xor_defs() {
            let _ = writeln!(out, "XOR_{} = {r} ^ {d}", r.index);
        }
        for (i, terms) in self.registers.iter().enumerate() {
            let _ = writeln!(out, "Register_{i}' = {}", join_terms(terms));
        }
        out
    }

    /// Parse a listing produced by [`Self::to_listing`].
    pub fn from_listing(text: &str, convention: BitConvention) -> Result<Self> {
        let mut xor_lines = 0u32;
        let mut registers: Vec<Vec<Term>> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| Error::Listing { line: line_no, reason };
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("missing `=`".into()))?;
            let lhs = lhs.trim();
            let terms = parse_terms(rhs).map_err(bad)?;
            if let Some(idx) = lhs.strip_prefix("XOR_") {
                let idx: u32 = idx.parse().map_err(|_| bad(format!("bad lhs `{lhs}`")))?;
                if idx != xor_lines || terms != [Term::reg(idx), Term::data(idx)] {
                    return Err(bad(format!("unexpected definition of XOR_{idx}")));
                }
                xor_lines += 1;
            } else if let Some(idx) = lhs.strip_prefix("Register_").and_then(|s| s.strip_suffix('\'')) {
                let idx: usize = idx.parse().map_err(|_| bad(format!("bad lhs `{lhs}`")))?;
                if idx != registers.len() {
                    return Err(bad(format!("register {idx} out of order")));
                }
                registers.push(terms);
            } else {
                return Err(bad(format!("unrecognised lhs `{lhs}`")));
            }
        }
        // step_bits is only recoverable from the XOR block when it does not
        // exceed the width; wider steps are recovered from the data terms.
        let max_data = registers
            .iter()
            .flatten()
            .filter(|t| t.kind == TermKind::DataIn)
            .map(|t| t.index + 1)
            .max()
            .unwrap_or(0);
        let step_bits = xor_lines.max(max_data);
        Self::from_terms(step_bits, convention, registers)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&StructuredListing::from(self)).expect("listing serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let listing: StructuredListing = serde_json::from_str(text)?;
        listing.try_into()
    }
}

pub(crate) fn join_terms(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms.iter().map(Term::to_string).collect::<Vec<_>>().join(" ^ ")
}

fn parse_terms(rhs: &str) -> std::result::Result<Vec<Term>, String> {
    let rhs = rhs.trim();
    if rhs == "0" {
        return Ok(Vec::new());
    }
    rhs.split('^').map(str::parse).collect()
}

/// Golden-file form of a network.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructuredListing {
    pub width: u32,
    pub step_bits: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convention: Option<BitConvention>,
    pub xor: Vec<Vec<Term>>,
    pub registers: Vec<Vec<Term>>,
}

impl From<&UpdateNetwork> for StructuredListing {
    fn from(net: &UpdateNetwork) -> Self {
        Self {
            width: net.width,
            step_bits: net.step_bits,
            convention: (net.convention != BitConvention::CANONICAL).then_some(net.convention),
            xor: net.xor_defs().iter().map(|d| d.to_vec()).collect(),
            registers: net.registers.clone(),
        }
    }
}

impl TryFrom<StructuredListing> for UpdateNetwork {
    type Error = Error;

    fn try_from(l: StructuredListing) -> Result<Self> {
        let net = UpdateNetwork::from_terms(
            l.step_bits,
            l.convention.unwrap_or(BitConvention::CANONICAL),
            l.registers,
        )?;
        if net.width != l.width || l.xor.len() as u32 != net.xor_count() {
            return Err(Error::Listing {
                line: 0,
                reason: "structured listing shape is inconsistent".into(),
            });
        }
        Ok(net)
    }
}

/// Derive the `step_bits`-shift network by symbolic simulation of the serial
/// circuit.
pub fn derive_network(poly: &GeneratorPolynomial, step_bits: u32, conv: BitConvention) -> Result<UpdateNetwork> {
    if step_bits > 64 {
        return Err(Error::StepMismatch {
            expected: 64,
            actual: step_bits,
        });
    }
    let w = poly.width();
    let mut regs: Vec<LinearForm> = (0..w).map(LinearForm::register).collect();
    for t in 0..step_bits {
        let input = LinearForm::data_bit(conv.data_bit_at(t, step_bits));
        regs = match conv.register_order {
            RegisterOrder::OutputStageFirst => {
                let feedback = regs[0] ^ input;
                (0..w)
                    .map(|i| {
                        let shifted = regs.get(i as usize + 1).copied().unwrap_or_default();
                        if poly.coefficient(w - 1 - i) {
                            shifted ^ feedback
                        } else {
                            shifted
                        }
                    })
                    .collect()
            }
            RegisterOrder::InputStageFirst => {
                let feedback = regs[w as usize - 1] ^ input;
                (0..w)
                    .map(|j| {
                        let shifted = if j == 0 {
                            LinearForm::default()
                        } else {
                            regs[j as usize - 1]
                        };
                        if poly.coefficient(j) {
                            shifted ^ feedback
                        } else {
                            shifted
                        }
                    })
                    .collect()
            }
        };
    }
    let xor_count = step_bits.min(w);
    Ok(UpdateNetwork {
        width: w,
        step_bits,
        convention: conv,
        registers: regs.into_iter().map(|f| factor(f, xor_count)).collect(),
    })
}

/// Free-function form of [`UpdateNetwork::apply`].
pub fn apply_network(state: LfsrState, data: u64, net: &UpdateNetwork) -> Result<LfsrState> {
    net.apply(state, data)
}
