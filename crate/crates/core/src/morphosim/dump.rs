//! Text dumps of the RC array and the frame buffer.

use std::fmt;

use super::asm::ResultSlot;
use super::lane::Lane;
use super::machine::{MachineState, COLS, ROWS};

/// RC-array contents captured after one instruction retired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSnapshot<V> {
    pub cycle: u64,
    pub pc: usize,
    pub instruction: String,
    pub cells: [[V; COLS]; ROWS],
}

impl<V: Lane> fmt::Display for GridSnapshot<V> {
    /// Compact lanes print an 8x8 hex grid; symbolic lanes list the non-zero
    /// cells one per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# cycle {} pc {}: {}", self.cycle, self.pc, self.instruction)?;
        if V::COMPACT {
            write!(f, "  ")?;
            for c in 0..COLS {
                write!(f, " c{c}")?;
            }
            writeln!(f)?;
            for (r, row) in self.cells.iter().enumerate() {
                write!(f, "r{r}")?;
                for v in row {
                    write!(f, " {}", v.render())?;
                }
                writeln!(f)?;
            }
        } else {
            for (r, row) in self.cells.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    if !v.is_zero() {
                        writeln!(f, "r{r} c{c}: {}", v.render())?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// One line per written frame-buffer byte: `addr bank set value [label]`,
/// ordered by set, bank, address. Result slots are labelled.
pub fn fb_dump<V: Lane>(state: &MachineState<V>, results: &[ResultSlot]) -> String {
    let mut out = String::new();
    for (set, bank, addr, v) in state.fb_written() {
        let label = results
            .iter()
            .find(|s| s.set == set && s.bank == bank && s.addr == addr)
            .map(|s| format!(" {}", s.label()))
            .unwrap_or_default();
        out.push_str(&format!("{addr:#04x} {bank} {set} {}{label}\n", v.render()));
    }
    out
}
