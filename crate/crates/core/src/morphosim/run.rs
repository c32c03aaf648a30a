//! Whole-program runs: input staging, execution, result extraction.

use std::fmt;

use serde::Serialize;

use super::asm::Program;
use super::dump::GridSnapshot;
use super::error::SimError;
use super::lane::{pack_channels, unpack_channel, Lane, LinearForm};
use super::machine::{MachineState, MainMemory, CONTEXT_BASE, DATA_BASE, REGISTER_BASE};
use crate::gf2::network::UpdateNetwork;

/// Channels a packed `u8` run can carry.
pub const MAX_CHANNELS: usize = 8;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub trace: bool,
    /// Capture the RC array after each of these (1-based) cycles.
    pub snapshots: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub cycle: u64,
    pub pc: usize,
    pub mnemonic: &'static str,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.cycle, self.pc, self.mnemonic)
    }
}

#[derive(Debug, Clone)]
pub struct RunResult<V> {
    pub cycles: u64,
    /// Extracted `Register_i'` values, in register order.
    pub registers: Vec<V>,
    pub state: MachineState<V>,
    pub trace: Vec<TraceEntry>,
    pub snapshots: Vec<GridSnapshot<V>>,
}

/// Run `program` with `data[i]` staged as `DataIn_i` and `registers[j]` as
/// `Register_j`, then read the results named by its `.result` directives.
pub fn run_lanes<V: Lane>(
    program: &Program,
    data: &[V; 8],
    registers: &[V],
    opts: &RunOptions,
) -> Result<RunResult<V>, SimError> {
    let mut memory = MainMemory::new();
    for (i, &v) in data.iter().enumerate() {
        memory.set_lane(DATA_BASE + i as u32, v);
    }
    for (j, &v) in registers.iter().enumerate() {
        memory.set_lane(REGISTER_BASE + j as u32, v);
    }
    for (k, w) in program.context_words.iter().enumerate() {
        memory.set_word(CONTEXT_BASE + 4 * k as u32, w.encode());
    }

    let mut state = MachineState::new(memory);
    let mut trace = Vec::new();
    let mut snapshots = Vec::new();
    while !state.is_halted(program) {
        let pc = state.pc;
        state.step(program)?;
        if opts.trace {
            trace.push(TraceEntry {
                cycle: state.cycles,
                pc,
                mnemonic: program.instructions[pc].mnemonic(),
            });
        }
        if opts.snapshots.contains(&state.cycles) {
            snapshots.push(GridSnapshot {
                cycle: state.cycles,
                pc,
                instruction: program.instructions[pc].to_string(),
                cells: state.array,
            });
        }
    }

    let registers = program
        .results
        .iter()
        .map(|slot| {
            state
                .fb(slot.set, slot.bank, slot.addr)
                .ok_or_else(|| SimError::MissingResult {
                    label: slot.label(),
                    set: slot.set,
                    bank: slot.bank,
                    addr: slot.addr,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(RunResult {
        cycles: state.cycles,
        registers,
        state,
        trace,
        snapshots,
    })
}

/// One concrete CRC channel: a data byte and the register state it updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelInput {
    pub data: u8,
    pub init: u64,
}

#[derive(Debug, Clone)]
pub struct ChannelRun {
    pub cycles: u64,
    /// Updated register state per channel, bit `i` = `Register_i'`.
    pub states: Vec<u64>,
    pub raw: RunResult<u8>,
}

/// Run up to eight channels bit-sliced through one program execution.
pub fn run_channels(program: &Program, channels: &[ChannelInput], opts: &RunOptions) -> Result<ChannelRun, SimError> {
    if channels.is_empty() || channels.len() > MAX_CHANNELS {
        return Err(SimError::Input(format!(
            "channel count must be 1..={MAX_CHANNELS}, got {}",
            channels.len()
        )));
    }
    let width = program.results.len() as u32;
    if let Some(c) = channels.iter().find(|c| width < 64 && c.init >> width != 0) {
        return Err(SimError::Input(format!(
            "initial state {:#x} does not fit {width} registers",
            c.init
        )));
    }
    let data: Vec<u64> = channels.iter().map(|c| u64::from(c.data)).collect();
    let inits: Vec<u64> = channels.iter().map(|c| c.init).collect();
    let data_lanes: [u8; 8] = std::array::from_fn(|i| pack_channels(&data, i as u32));
    let reg_lanes: Vec<u8> = (0..width).map(|j| pack_channels(&inits, j)).collect();

    let raw = run_lanes(program, &data_lanes, &reg_lanes, opts)?;
    let states = (0..channels.len()).map(|k| unpack_channel(&raw.registers, k)).collect();
    Ok(ChannelRun {
        cycles: raw.cycles,
        states,
        raw,
    })
}

/// Run with every input replaced by its own symbol.
pub fn run_symbolic(program: &Program, opts: &RunOptions) -> Result<RunResult<LinearForm>, SimError> {
    let data: [LinearForm; 8] = std::array::from_fn(|i| LinearForm::data_bit(i as u32));
    let registers: Vec<LinearForm> = (0..program.results.len() as u32).map(LinearForm::register).collect();
    run_lanes(program, &data, &registers, opts)
}

/// Registers whose symbolic result differs from `net`'s equation. An empty
/// list proves the program computes the network for every input.
pub fn symbolic_mismatches(program: &Program, net: &UpdateNetwork) -> Result<Vec<usize>, SimError> {
    let forms = net.linear_forms();
    if forms.len() != program.results.len() {
        return Err(SimError::Input(format!(
            "program produces {} registers, network has {}",
            program.results.len(),
            forms.len()
        )));
    }
    let run = run_symbolic(program, &RunOptions::default())?;
    Ok(run
        .registers
        .iter()
        .zip(&forms)
        .enumerate()
        .filter(|(_, (got, want))| got != want)
        .map(|(i, _)| i)
        .collect())
}
