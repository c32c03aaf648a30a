//! Text assembler for TinyRISC listings.
//!
//! One instruction per line, operands separated by commas. `#` and `;` start
//! comments and a leading `label:` is ignored. Numbers are decimal, `0x..`,
//! or hex with a trailing `hex` (`14hex`). Directives:
//!
//! ```text
//! .program <name>
//! .poly <polynomial>
//! .context xor-ab|xor-left        # next context word in main memory
//! .result <register>, <bank>, <set>, <addr>
//! ```

use serde::Serialize;

use super::error::SimError;
use super::isa::{Bank, Block, ContextWord, Instruction, Reg};
use super::machine::{COLS, CONTEXT_WORDS, FB_BYTES, PLANES, SETS};

/// Where one result register is left in the frame buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResultSlot {
    pub register: u32,
    pub bank: Bank,
    pub set: u8,
    pub addr: u8,
}

impl ResultSlot {
    pub fn label(&self) -> String {
        format!("Register_{}'", self.register)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Program {
    pub name: String,
    pub poly: Option<String>,
    pub instructions: Vec<Instruction>,
    /// Source line (1-based) of each instruction.
    pub lines: Vec<usize>,
    pub context_words: Vec<ContextWord>,
    /// Sorted by register index; indices are contiguous from 0.
    pub results: Vec<ResultSlot>,
}

impl Program {
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Render back to assembler text. Re-assembling the output yields an
    /// equal program apart from line numbers.
    pub fn to_listing(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            out.push_str(&format!(".program {}\n", self.name));
        }
        if let Some(p) = &self.poly {
            out.push_str(&format!(".poly {p}\n"));
        }
        for c in &self.context_words {
            out.push_str(&format!(".context {}\n", c.name()));
        }
        for r in &self.results {
            out.push_str(&format!(
                ".result {}, {}, {}, {:#x}\n",
                r.register, r.bank, r.set, r.addr
            ));
        }
        for (pc, ins) in self.instructions.iter().enumerate() {
            out.push_str(&format!("{pc}: {ins}\n"));
        }
        out
    }
}

pub fn assemble(text: &str) -> Result<Program, SimError> {
    let mut prog = Program::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |reason: String| SimError::Asm { line, reason };
        let body = strip_label(strip_comment(raw)).trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = match body.find(char::is_whitespace) {
            Some(i) => (&body[..i], body[i..].trim()),
            None => (body, ""),
        };
        let head = head.to_ascii_lowercase();
        if let Some(directive) = head.strip_prefix('.') {
            directive_line(&mut prog, directive, rest).map_err(err)?;
            continue;
        }
        let ops: Vec<&str> = if rest.is_empty() {
            Vec::new()
        } else {
            rest.split(',').map(str::trim).collect()
        };
        let ins = instruction(&head, &ops).map_err(err)?;
        prog.instructions.push(ins);
        prog.lines.push(line);
    }
    prog.results.sort_by_key(|r| r.register);
    for (i, r) in prog.results.iter().enumerate() {
        if r.register as usize != i {
            return Err(SimError::Asm {
                line: 0,
                reason: format!("result registers must be 0..n without gaps, missing Register_{i}"),
            });
        }
    }
    Ok(prog)
}

fn strip_comment(s: &str) -> &str {
    match s.find(['#', ';']) {
        Some(i) => &s[..i],
        None => s,
    }
}

fn strip_label(s: &str) -> &str {
    let t = s.trim_start();
    match t.find(':') {
        Some(i) if i > 0 && t[..i].chars().all(|c| c.is_ascii_alphanumeric() || c == '_') => &t[i + 1..],
        _ => t,
    }
}

fn directive_line(prog: &mut Program, name: &str, rest: &str) -> Result<(), String> {
    match name {
        "program" => prog.name = rest.to_string(),
        "poly" => prog.poly = Some(rest.to_string()),
        "context" => prog
            .context_words
            .push(ContextWord::from_name(rest).ok_or_else(|| format!("unknown context word `{rest}`"))?),
        "result" => {
            let ops: Vec<&str> = rest.split(',').map(str::trim).collect();
            expect_count(".result", &ops, 4)?;
            let register = number(ops[0])?;
            let bank = match ops[1].to_ascii_uppercase().as_str() {
                "A" | "0" => Bank::A,
                "B" | "1" => Bank::B,
                other => return Err(format!("invalid bank `{other}`")),
            };
            let set = ranged(ops[2], SETS, "set")?;
            let addr = ranged(ops[3], FB_BYTES, "address")?;
            if prog.results.iter().any(|r| r.register == register) {
                return Err(format!("duplicate result for Register_{register}"));
            }
            prog.results.push(ResultSlot {
                register,
                bank,
                set,
                addr,
            });
        }
        other => return Err(format!("unknown directive `.{other}`")),
    }
    Ok(())
}

fn instruction(mnemonic: &str, ops: &[&str]) -> Result<Instruction, String> {
    Ok(match mnemonic {
        "ldui" => {
            expect_count(mnemonic, ops, 2)?;
            let imm = number(ops[1])?;
            Instruction::Ldui {
                rd: reg(ops[0])?,
                imm: u16::try_from(imm).map_err(|_| format!("immediate {imm:#x} exceeds 16 bits"))?,
            }
        }
        "ldfb" => {
            expect_count(mnemonic, ops, 4)?;
            let words = ranged(ops[3], FB_BYTES / 4 + 1, "word count")?;
            if words == 0 {
                return Err("word count must be positive".into());
            }
            Instruction::Ldfb {
                rs: reg(ops[0])?,
                bank: bank(ops[1])?,
                set: ranged(ops[2], SETS, "set")?,
                words,
            }
        }
        "ldctxt" => {
            expect_count(mnemonic, ops, 5)?;
            let count = ranged(ops[4], CONTEXT_WORDS + 1, "count")?;
            if count == 0 {
                return Err("context count must be positive".into());
            }
            Instruction::Ldctxt {
                rs: reg(ops[0])?,
                plane: ranged(ops[1], PLANES, "plane")?,
                block: Block::from_index(number(ops[2])?).ok_or("block must be 0 or 1")?,
                word: ranged(ops[3], CONTEXT_WORDS, "context word")?,
                count,
            }
        }
        "dbcdc" | "dbcdbc" => {
            expect_count(mnemonic, ops, 7)?;
            Instruction::Dbcdc {
                rs: reg(ops[0])?,
                bank_b_offset: ranged(ops[1], FB_BYTES, "bank B offset")?,
                set: ranged(ops[2], SETS, "set")?,
                column: ranged(ops[3], COLS, "column")?,
                plane: ranged(ops[4], PLANES, "plane")?,
                context: ranged(ops[5], CONTEXT_WORDS, "context word")?,
                bank_a_addr: ranged(ops[6], FB_BYTES, "bank A address")?,
            }
        }
        "sbcdb" => {
            expect_count(mnemonic, ops, 7)?;
            Instruction::Sbcdb {
                rs: reg(ops[0])?,
                column: ranged(ops[1], COLS, "column")?,
                set: ranged(ops[2], SETS, "set")?,
                context: ranged(ops[3], CONTEXT_WORDS, "context word")?,
                plane: ranged(ops[4], PLANES, "plane")?,
                bank: bank(ops[5])?,
                addr: ranged(ops[6], FB_BYTES, "address")?,
            }
        }
        "wfbi" => {
            expect_count(mnemonic, ops, 5)?;
            if number(ops[3])? != 0 {
                return Err("reserved wfbi field must be 0".into());
            }
            Instruction::Wfbi {
                column: ranged(ops[0], COLS, "column")?,
                set: ranged(ops[1], SETS, "set")?,
                bank: bank(ops[2])?,
                addr: ranged(ops[4], FB_BYTES, "address")?,
            }
        }
        "add" => {
            expect_count(mnemonic, ops, 3)?;
            Instruction::Add {
                rd: reg(ops[0])?,
                rs: reg(ops[1])?,
                rt: reg(ops[2])?,
            }
        }
        "nop" => {
            expect_count(mnemonic, ops, 0)?;
            Instruction::NOP
        }
        other => return Err(format!("unknown mnemonic `{other}`")),
    })
}

fn expect_count(mnemonic: &str, ops: &[&str], n: usize) -> Result<(), String> {
    if ops.len() != n {
        return Err(format!("{mnemonic} takes {n} operands, got {}", ops.len()));
    }
    if ops.iter().any(|o| o.is_empty()) {
        return Err(format!("{mnemonic}: empty operand"));
    }
    Ok(())
}

fn number(s: &str) -> Result<u32, String> {
    let t = s.trim().to_ascii_lowercase();
    let parsed = if let Some(h) = t.strip_prefix("0x") {
        u32::from_str_radix(h, 16)
    } else if let Some(h) = t.strip_suffix("hex") {
        u32::from_str_radix(h.trim_end_matches(['_', ' ']), 16)
    } else {
        t.parse()
    };
    parsed.map_err(|_| format!("malformed number `{s}`"))
}

fn ranged(s: &str, limit: usize, what: &str) -> Result<u8, String> {
    let v = number(s)?;
    if v as usize >= limit {
        return Err(format!("{what} {v:#x} out of range (limit {limit:#x})"));
    }
    Ok(v as u8)
}

fn reg(s: &str) -> Result<Reg, String> {
    let t = s.trim().to_ascii_lowercase();
    let n = t
        .strip_prefix('r')
        .and_then(|n| n.parse::<u8>().ok())
        .ok_or_else(|| format!("malformed register `{s}`"))?;
    if n >= 16 {
        return Err(format!("register r{n} does not exist"));
    }
    Ok(Reg(n))
}

fn bank(s: &str) -> Result<Bank, String> {
    Bank::from_index(number(s)?).ok_or_else(|| "bank must be 0 (A) or 1 (B)".into())
}
