//! Minsky (counter) machines: INC and DEC-or-jump instructions over a fixed
//! register file.  Halting means the program counter leaves the code.

use super::RunOutcome;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MMInstr {
    #[serde(rename = "INC")]
    Inc(usize),
    #[serde(rename = "DEC")]
    Dec(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MMProg {
    /// PC value of the first instruction.
    pub start: usize,
    /// Number of registers.
    pub regs: usize,
    pub instrs: Vec<MMInstr>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MMState {
    pub pc: usize,
    pub regs: Vec<u64>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MMError {
    #[error("state has {state} registers but program declares {prog}")]
    RegisterCountMismatch { state: usize, prog: usize },
    #[error("instruction uses register {reg} but program declares {prog}")]
    RegisterOutOfRange { reg: usize, prog: usize },
}

impl MMProg {
    /// Checks that every instruction addresses a declared register.
    pub fn validate(&self) -> Result<(), MMError> {
        for i in &self.instrs {
            let r = match i {
                MMInstr::Inc(r) => *r,
                MMInstr::Dec(r, _) => *r,
            };
            if r >= self.regs {
                return Err(MMError::RegisterOutOfRange { reg: r, prog: self.regs });
            }
        }
        Ok(())
    }

    /// True if some instruction `i: DEC _ i` jumps to itself.
    pub fn has_self_loop(&self) -> bool {
        self.instrs
            .iter()
            .enumerate()
            .any(|(k, i)| matches!(i, MMInstr::Dec(_, j) if *j == self.start + k))
    }
}

/// `out i (s,P) := i < s \/ |P| + s <= i`: the PC is outside the code.
pub fn mm_out_code(i: usize, prog: &MMProg) -> bool {
    i < prog.start || prog.start + prog.instrs.len() <= i
}

/// One deterministic step; `None` when the state is stuck (PC outside the
/// code).
pub fn mm_step(prog: &MMProg, st: &MMState) -> Result<Option<MMState>, MMError> {
    if st.regs.len() != prog.regs {
        return Err(MMError::RegisterCountMismatch { state: st.regs.len(), prog: prog.regs });
    }
    if mm_out_code(st.pc, prog) {
        return Ok(None);
    }
    let mut next = st.clone();
    match prog.instrs[st.pc - prog.start] {
        MMInstr::Inc(r) => {
            next.regs[r] += 1;
            next.pc += 1;
        }
        MMInstr::Dec(r, j) => {
            if next.regs[r] > 0 {
                next.regs[r] -= 1;
                next.pc += 1;
            } else {
                next.pc = j;
            }
        }
    }
    Ok(Some(next))
}

/// Iterates [`mm_step`] at most `fuel` times.
pub fn mm_run(prog: &MMProg, st: MMState, fuel: u64) -> Result<RunOutcome<MMState>, MMError> {
    let mut cur = st;
    for steps in 0..=fuel {
        match mm_step(prog, &cur)? {
            None => return Ok(RunOutcome::Halted { state: cur, steps }),
            Some(next) => {
                if steps == fuel {
                    return Ok(RunOutcome::OutOfFuel { state: cur });
                }
                cur = next;
            }
        }
    }
    unreachable!()
}
