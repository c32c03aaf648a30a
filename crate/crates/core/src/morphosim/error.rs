use thiserror::Error;

use super::isa::Bank;

/// Why an instruction could not execute.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaultKind {
    #[error("frame-buffer address {addr:#x} out of range (set {set}, bank {bank})")]
    FbOutOfRange { set: u8, bank: Bank, addr: u32 },

    #[error("read of unwritten frame-buffer byte {addr:#x} (set {set}, bank {bank})")]
    UninitializedRead { set: u8, bank: Bank, addr: u32 },

    #[error("context word {word} of plane {plane} is not loaded")]
    MissingContext { plane: u8, word: u8 },

    #[error("context word {word} selects {found}, instruction needs {expected}")]
    ContextMismatch {
        word: u8,
        expected: &'static str,
        found: &'static str,
    },

    #[error("main-memory word {value:#010x} at {addr:#x} is not a valid context word")]
    BadContextEncoding { addr: u32, value: u32 },

    #[error("context slot {slot} out of range")]
    ContextOutOfRange { slot: u32 },
}

/// A simulation fault, pinned to the instruction that raised it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("fault at cycle {cycle} (pc {pc}, `{instruction}`): {kind}")]
pub struct SimFault {
    /// 1-based cycle the faulting instruction would have retired in.
    pub cycle: u64,
    pub pc: usize,
    pub instruction: String,
    pub kind: FaultKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("assembly error at line {line}: {reason}")]
    Asm { line: usize, reason: String },

    #[error(transparent)]
    Fault(#[from] SimFault),

    #[error("program finished without writing {label} at {bank}[{addr:#x}] of set {set}")]
    MissingResult {
        label: String,
        set: u8,
        bank: Bank,
        addr: u8,
    },

    #[error("invalid run input: {0}")]
    Input(String),
}
