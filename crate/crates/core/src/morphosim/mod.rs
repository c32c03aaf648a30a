//! Cycle-level simulator for a TinyRISC host driving an 8x8 XOR cell array
//! through a two-set, two-bank frame buffer.

pub mod asm;
pub mod dump;
pub mod error;
pub mod isa;
pub mod lane;
pub mod machine;
pub mod run;

pub use asm::{assemble, Program, ResultSlot};
pub use dump::{fb_dump, GridSnapshot};
pub use error::{FaultKind, SimError, SimFault};
pub use isa::{Bank, Block, ContextWord, Instruction, Reg};
pub use lane::Lane;
pub use machine::{MachineState, MainMemory};
pub use run::{
    run_channels, run_lanes, run_symbolic, symbolic_mismatches, ChannelInput, ChannelRun, RunOptions, RunResult,
    TraceEntry,
};

pub const CCITT_LISTING: &str = include_str!("../../programs/ccitt.asm");
pub const CRC16_LISTING: &str = include_str!("../../programs/crc16.asm");

/// The bundled byte-update program for CRC-CCITT.
pub fn ccitt_program() -> Program {
    assemble(CCITT_LISTING).expect("bundled listing assembles")
}

/// The bundled byte-update program for CRC-16.
pub fn crc16_program() -> Program {
    assemble(CRC16_LISTING).expect("bundled listing assembles")
}

/// Look up a bundled program by name.
pub fn builtin_program(name: &str) -> Option<Program> {
    match name {
        "ccitt" => Some(ccitt_program()),
        "crc16" => Some(crc16_program()),
        _ => None,
    }
}
