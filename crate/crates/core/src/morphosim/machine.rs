//! Machine state and single-instruction execution.
//!
//! Every instruction, DMA transfers included, retires in one cycle.

use std::collections::BTreeMap;

use super::asm::Program;
use super::error::{FaultKind, SimFault};
use super::isa::{Bank, Block, ContextWord, Instruction, Reg};
use super::lane::Lane;

pub const ROWS: usize = 8;
pub const COLS: usize = 8;
pub const SETS: usize = 2;
pub const BANKS: usize = 2;
pub const FB_BYTES: usize = 128;
pub const PLANES: usize = 2;
pub const CONTEXT_WORDS: usize = 16;

/// Main-memory base of the data lanes: lane `i` holds `DataIn_i`.
pub const DATA_BASE: u32 = 0x1_0000;
/// Main-memory base of the initial register lanes.
pub const REGISTER_BASE: u32 = 0x2_0000;
/// Main-memory base of the context words (4 bytes apart).
pub const CONTEXT_BASE: u32 = 0x3_0000;

/// Byte-addressed lane storage plus a separate 32-bit word store for
/// context words. Unwritten lanes read as zero.
#[derive(Debug, Clone, Default)]
pub struct MainMemory<V> {
    lanes: BTreeMap<u32, V>,
    words: BTreeMap<u32, u32>,
}

impl<V: Lane> MainMemory<V> {
    pub fn new() -> Self {
        Self {
            lanes: BTreeMap::new(),
            words: BTreeMap::new(),
        }
    }

    pub fn set_lane(&mut self, addr: u32, v: V) {
        self.lanes.insert(addr, v);
    }

    pub fn lane(&self, addr: u32) -> V {
        self.lanes.get(&addr).copied().unwrap_or_else(V::zero)
    }

    pub fn set_word(&mut self, addr: u32, w: u32) {
        self.words.insert(addr, w);
    }

    pub fn word(&self, addr: u32) -> u32 {
        self.words.get(&addr).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct MachineState<V> {
    pub regs: [u32; 16],
    pub pc: usize,
    pub cycles: u64,
    pub memory: MainMemory<V>,
    fb: Vec<Option<V>>,
    context: Vec<Option<ContextWord>>,
    /// Output register of each cell, `array[row][col]`.
    pub array: [[V; COLS]; ROWS],
}

impl<V: Lane> MachineState<V> {
    pub fn new(memory: MainMemory<V>) -> Self {
        Self {
            regs: [0; 16],
            pc: 0,
            cycles: 0,
            memory,
            fb: vec![None; SETS * BANKS * FB_BYTES],
            context: vec![None; 2 * PLANES * CONTEXT_WORDS],
            array: [[V::zero(); COLS]; ROWS],
        }
    }

    fn fb_index(set: u8, bank: Bank, addr: usize) -> usize {
        (usize::from(set) * BANKS + bank.index()) * FB_BYTES + addr
    }

    /// Frame-buffer byte, `None` if never written.
    pub fn fb(&self, set: u8, bank: Bank, addr: u8) -> Option<V> {
        self.fb
            .get(Self::fb_index(set, bank, usize::from(addr)))
            .copied()
            .flatten()
    }

    /// Every written frame-buffer byte as `(set, bank, addr, value)`.
    pub fn fb_written(&self) -> Vec<(u8, Bank, u8, V)> {
        let mut out = Vec::new();
        for set in 0..SETS as u8 {
            for bank in [Bank::A, Bank::B] {
                for addr in 0..FB_BYTES as u8 {
                    if let Some(v) = self.fb(set, bank, addr) {
                        out.push((set, bank, addr, v));
                    }
                }
            }
        }
        out
    }

    pub fn context_word(&self, block: Block, plane: u8, word: u8) -> Option<ContextWord> {
        self.context[(block.index() * PLANES + usize::from(plane)) * CONTEXT_WORDS + usize::from(word)]
    }

    pub fn is_halted(&self, program: &Program) -> bool {
        self.pc >= program.len()
    }

    fn reg(&self, r: Reg) -> u32 {
        if r.0 == 0 {
            0
        } else {
            self.regs[usize::from(r.0)]
        }
    }

    fn set_reg(&mut self, r: Reg, v: u32) {
        if r.0 != 0 {
            self.regs[usize::from(r.0)] = v;
        }
    }

    fn read_fb(&self, set: u8, bank: Bank, addr: u32) -> Result<V, FaultKind> {
        if addr as usize >= FB_BYTES {
            return Err(FaultKind::FbOutOfRange { set, bank, addr });
        }
        self.fb[Self::fb_index(set, bank, addr as usize)].ok_or(FaultKind::UninitializedRead { set, bank, addr })
    }

    fn write_fb(&mut self, set: u8, bank: Bank, addr: u32, v: V) -> Result<(), FaultKind> {
        if addr as usize >= FB_BYTES {
            return Err(FaultKind::FbOutOfRange { set, bank, addr });
        }
        self.fb[Self::fb_index(set, bank, addr as usize)] = Some(v);
        Ok(())
    }

    fn require_context(&self, plane: u8, word: u8, expected: ContextWord) -> Result<(), FaultKind> {
        match self.context_word(Block::Column, plane, word) {
            None => Err(FaultKind::MissingContext { plane, word }),
            Some(w) if w != expected => Err(FaultKind::ContextMismatch {
                word,
                expected: expected.name(),
                found: w.name(),
            }),
            Some(_) => Ok(()),
        }
    }

    /// Execute the instruction at `pc` and retire it. Stepping a halted
    /// machine is a no-op.
    pub fn step(&mut self, program: &Program) -> Result<(), SimFault> {
        let Some(&ins) = program.instructions.get(self.pc) else {
            return Ok(());
        };
        self.exec(ins).map_err(|kind| SimFault {
            cycle: self.cycles + 1,
            pc: self.pc,
            instruction: ins.to_string(),
            kind,
        })?;
        self.pc += 1;
        self.cycles += 1;
        Ok(())
    }

    fn exec(&mut self, ins: Instruction) -> Result<(), FaultKind> {
        match ins {
            Instruction::Ldui { rd, imm } => self.set_reg(rd, u32::from(imm) << 16),
            Instruction::Add { rd, rs, rt } => {
                let v = self.reg(rs).wrapping_add(self.reg(rt));
                self.set_reg(rd, v);
            }
            Instruction::Ldfb { rs, bank, set, words } => {
                let base = self.reg(rs);
                for j in 0..u32::from(words) * 4 {
                    let v = self.memory.lane(base.wrapping_add(j));
                    self.write_fb(set, bank, j, v)?;
                }
            }
            Instruction::Ldctxt {
                rs,
                plane,
                block,
                word,
                count,
            } => {
                let base = self.reg(rs);
                for j in 0..u32::from(count) {
                    let slot = u32::from(word) + j;
                    if slot as usize >= CONTEXT_WORDS {
                        return Err(FaultKind::ContextOutOfRange { slot });
                    }
                    let addr = base.wrapping_add(4 * j);
                    let value = self.memory.word(addr);
                    let w = ContextWord::decode(value).ok_or(FaultKind::BadContextEncoding { addr, value })?;
                    let idx = (block.index() * PLANES + usize::from(plane)) * CONTEXT_WORDS + slot as usize;
                    self.context[idx] = Some(w);
                }
            }
            Instruction::Dbcdc {
                rs,
                bank_b_offset,
                set,
                column,
                plane,
                context,
                bank_a_addr,
            } => {
                self.require_context(plane, context, ContextWord::XorAB)?;
                let b_base = (self.reg(rs) & 0xffff) + u32::from(bank_b_offset);
                let mut col = [V::zero(); ROWS];
                for (r, cell) in col.iter_mut().enumerate() {
                    let a = self.read_fb(set, Bank::A, u32::from(bank_a_addr) + r as u32)?;
                    let b = self.read_fb(set, Bank::B, b_base + r as u32)?;
                    *cell = a ^ b;
                }
                for (r, v) in col.into_iter().enumerate() {
                    self.array[r][usize::from(column)] = v;
                }
            }
            Instruction::Sbcdb {
                rs,
                column,
                set,
                context,
                plane,
                bank,
                addr,
            } => {
                self.require_context(plane, context, ContextWord::XorLeft)?;
                let base = (self.reg(rs) & 0xffff) + u32::from(addr);
                let c = usize::from(column);
                let mut col = [V::zero(); ROWS];
                for (r, cell) in col.iter_mut().enumerate() {
                    let operand = self.read_fb(set, bank, base + r as u32)?;
                    let left = if c == 0 { V::zero() } else { self.array[r][c - 1] };
                    *cell = operand ^ left;
                }
                for (r, v) in col.into_iter().enumerate() {
                    self.array[r][c] = v;
                }
            }
            Instruction::Wfbi {
                column,
                set,
                bank,
                addr,
            } => {
                for r in 0..ROWS {
                    let v = self.array[r][usize::from(column)];
                    self.write_fb(set, bank, u32::from(addr) + r as u32, v)?;
                }
            }
        }
        Ok(())
    }
}
