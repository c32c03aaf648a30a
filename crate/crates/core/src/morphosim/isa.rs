use std::fmt;

use serde::Serialize;

/// Frame-buffer bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Bank {
    A,
    B,
}

impl Bank {
    pub fn index(self) -> usize {
        match self {
            Bank::A => 0,
            Bank::B => 1,
        }
    }

    pub fn from_index(i: u32) -> Option<Self> {
        match i {
            0 => Some(Bank::A),
            1 => Some(Bank::B),
            _ => None,
        }
    }
}

impl fmt::Display for Bank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bank::A => "A",
            Bank::B => "B",
        })
    }
}

/// Context-memory block: column words drive column broadcasts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Block {
    Column,
    Row,
}

impl Block {
    pub fn index(self) -> usize {
        match self {
            Block::Column => 0,
            Block::Row => 1,
        }
    }

    pub fn from_index(i: u32) -> Option<Self> {
        match i {
            0 => Some(Block::Column),
            1 => Some(Block::Row),
            _ => None,
        }
    }
}

/// Cell operation selected by a context word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ContextWord {
    /// XOR the bank-A and bank-B operands.
    XorAB,
    /// XOR one frame-buffer operand with the left neighbour's output.
    XorLeft,
}

impl ContextWord {
    const XOR_AB: u32 = 0x01;
    const XOR_LEFT: u32 = 0x02;

    /// 32-bit image stored in main memory; all bits above the opcode byte
    /// are reserved and zero.
    pub fn encode(self) -> u32 {
        match self {
            ContextWord::XorAB => Self::XOR_AB,
            ContextWord::XorLeft => Self::XOR_LEFT,
        }
    }

    pub fn decode(word: u32) -> Option<Self> {
        match word {
            Self::XOR_AB => Some(ContextWord::XorAB),
            Self::XOR_LEFT => Some(ContextWord::XorLeft),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ContextWord::XorAB => "xor-ab",
            ContextWord::XorLeft => "xor-left",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "xor-ab" => Some(ContextWord::XorAB),
            "xor-left" => Some(ContextWord::XorLeft),
            _ => None,
        }
    }
}

/// TinyRISC register number; `r0` always reads zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Reg(pub u8);

impl fmt::Display for Reg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// The instruction subset the CRC mappings use.
///
/// Frame-buffer addresses in broadcasts are byte offsets; a base register
/// contributes its low 16 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Instruction {
    /// `rd <- imm << 16`.
    Ldui { rd: Reg, imm: u16 },
    /// DMA `words` 32-bit words from main memory at `rs` into the frame
    /// buffer starting at address 0.
    Ldfb { rs: Reg, bank: Bank, set: u8, words: u8 },
    /// DMA `count` context words from main memory at `rs`.
    Ldctxt {
        rs: Reg,
        plane: u8,
        block: Block,
        word: u8,
        count: u8,
    },
    /// Double-bank column broadcast: cell `(r, column)` gets
    /// `A[bank_a_addr + r] ^ B[rs + bank_b_offset + r]`.
    Dbcdc {
        rs: Reg,
        bank_b_offset: u8,
        set: u8,
        column: u8,
        plane: u8,
        context: u8,
        bank_a_addr: u8,
    },
    /// Single-bank column broadcast: cell `(r, column)` gets
    /// `FB[rs + addr + r] ^ output(r, column - 1)`; column 0 has no left
    /// neighbour and takes the frame-buffer operand alone.
    Sbcdb {
        rs: Reg,
        column: u8,
        set: u8,
        context: u8,
        plane: u8,
        bank: Bank,
        addr: u8,
    },
    /// Write the eight output registers of `column` to consecutive bytes.
    Wfbi { column: u8, set: u8, bank: Bank, addr: u8 },
    /// `rd <- rs + rt`; `add r0, r0, r0` is the canonical no-op.
    Add { rd: Reg, rs: Reg, rt: Reg },
}

impl Instruction {
    pub const NOP: Instruction = Instruction::Add {
        rd: Reg(0),
        rs: Reg(0),
        rt: Reg(0),
    };

    pub fn mnemonic(&self) -> &'static str {
        match self {
            Instruction::Ldui { .. } => "ldui",
            Instruction::Ldfb { .. } => "ldfb",
            Instruction::Ldctxt { .. } => "ldctxt",
            Instruction::Dbcdc { .. } => "dbcdc",
            Instruction::Sbcdb { .. } => "sbcdb",
            Instruction::Wfbi { .. } => "wfbi",
            Instruction::Add { .. } => "add",
        }
    }

    pub fn is_nop(&self) -> bool {
        *self == Self::NOP
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.mnemonic();
        match *self {
            Instruction::Ldui { rd, imm } => write!(f, "{m} {rd}, {imm:#x}"),
            Instruction::Ldfb { rs, bank, set, words } => write!(f, "{m} {rs}, {}, {set}, {words}", bank.index()),
            Instruction::Ldctxt {
                rs,
                plane,
                block,
                word,
                count,
            } => write!(f, "{m} {rs}, {plane}, {}, {word}, {count}", block.index()),
            Instruction::Dbcdc {
                rs,
                bank_b_offset,
                set,
                column,
                plane,
                context,
                bank_a_addr,
            } => write!(
                f,
                "{m} {rs}, {bank_b_offset:#x}, {set}, {column}, {plane}, {context}, {bank_a_addr:#x}"
            ),
            Instruction::Sbcdb {
                rs,
                column,
                set,
                context,
                plane,
                bank,
                addr,
            } => write!(
                f,
                "{m} {rs}, {column}, {set}, {context}, {plane}, {}, {addr:#x}",
                bank.index()
            ),
            Instruction::Wfbi {
                column,
                set,
                bank,
                addr,
            } => write!(f, "{m} {column}, {set}, {}, 0, {addr:#x}", bank.index()),
            Instruction::Add { rd, rs, rt } => write!(f, "{m} {rd}, {rs}, {rt}"),
        }
    }
}
