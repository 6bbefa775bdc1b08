//! Compilers between machine models: Minsky-machine self-loop removal,
//! MM to FRACTRAN, and mu-recursive algorithms to Minsky machines over
//! unboundedly many registers (with a finitization step).

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::models::recalg::RecAlg;
use crate::models::{FractranProg, MMInstr, MMProg, MMState, RunOutcome};
use crate::numtheory::{reg_prime, state_prime};
use crate::{nat, Nat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("compiler requires programs starting at PC 1, got {0}")]
    UnsupportedStart(usize),
    #[error("program contains a self loop; remove self loops first")]
    SelfLoop,
    #[error("register layout constraint violated: {0}")]
    Layout(String),
    #[error("ill-typed algorithm: {0}")]
    IllTyped(String),
}

/// Summary of a compilation, for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct CompileReport {
    pub source_size: usize,
    pub target_size: usize,
    pub register_budget: usize,
    pub spare_registers: usize,
}

// ---------------------------------------------------------------------------
// Self-loop removal
// ---------------------------------------------------------------------------

/// Remove self loops `i: DEC a i` from a machine starting at PC 1, at the
/// cost of one extra always-zero register (the new register 0). Jumps that
/// leave the code are redirected to PC 0; self loops jump to a trailing
/// two-instruction cycle.
pub fn mm_remove_self_loops(prog: &MMProg) -> Result<MMProg, CompileError> {
    if prog.start != 1 {
        return Err(CompileError::UnsupportedStart(prog.start));
    }
    let k = prog.instrs.len();
    let mut instrs: Vec<MMInstr> = prog
        .instrs
        .iter()
        .enumerate()
        .map(|(idx, ins)| {
            let i = idx + 1; // PC value of this instruction
            match *ins {
                MMInstr::Inc(a) => MMInstr::Inc(1 + a),
                MMInstr::Dec(a, j) if j == i => MMInstr::Dec(1 + a, 2 + k),
                MMInstr::Dec(a, j) if 1 <= j && j <= k => MMInstr::Dec(1 + a, j),
                MMInstr::Dec(a, _) => MMInstr::Dec(1 + a, 0),
            }
        })
        .collect();
    // PC k+1: unconditional halt; PCs k+2, k+3: the spin cycle.
    instrs.push(MMInstr::Dec(0, 0));
    instrs.push(MMInstr::Dec(0, 3 + k));
    instrs.push(MMInstr::Dec(0, 2 + k));
    Ok(MMProg {
        start: 1,
        regs: prog.regs + 1,
        instrs,
    })
}

// ---------------------------------------------------------------------------
// MM -> FRACTRAN
// ---------------------------------------------------------------------------

/// Godel-encode an MM state as `p_i * prod_j q_j^(regs[j])` where `p_i` is
/// the state prime for the PC and `q_j` the register primes.
pub fn godel_encode(st: &MMState) -> Nat {
    let mut x = nat(state_prime(st.pc));
    for (j, &v) in st.regs.iter().enumerate() {
        x *= nat(reg_prime(j)).pow(v as u32);
    }
    x
}

/// Translate a self-loop-free machine starting at PC 1 into a FRACTRAN
/// program that simulates it in lockstep on Godel-encoded states.
pub fn mm_to_fractran(prog: &MMProg) -> Result<FractranProg, CompileError> {
    if prog.start != 1 {
        return Err(CompileError::UnsupportedStart(prog.start));
    }
    if prog.has_self_loop() {
        return Err(CompileError::SelfLoop);
    }
    let mut fractions: Vec<(Nat, Nat)> = Vec::new();
    for (idx, ins) in prog.instrs.iter().enumerate() {
        let i = idx + 1;
        match *ins {
            MMInstr::Inc(a) => {
                fractions.push((nat(state_prime(i + 1) * reg_prime(a)), nat(state_prime(i))));
            }
            MMInstr::Dec(a, j) => {
                fractions.push((nat(state_prime(i + 1)), nat(state_prime(i) * reg_prime(a))));
                fractions.push((nat(state_prime(j)), nat(state_prime(i))));
            }
        }
    }
    Ok(FractranProg::new(fractions))
}

// ---------------------------------------------------------------------------
// N-indexed register machines
// ---------------------------------------------------------------------------

/// Finite-support register environment over unboundedly many registers;
/// unmentioned registers hold 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RegEnv(BTreeMap<usize, u64>);

impl RegEnv {
    pub fn from_slice(v: &[u64]) -> Self {
        let mut env = RegEnv::default();
        for (i, &x) in v.iter().enumerate() {
            env.set(i, x);
        }
        env
    }

    pub fn get(&self, r: usize) -> u64 {
        self.0.get(&r).copied().unwrap_or(0)
    }

    pub fn set(&mut self, r: usize, v: u64) {
        if v == 0 {
            self.0.remove(&r);
        } else {
            self.0.insert(r, v);
        }
    }

    /// Largest register index with a nonzero value.
    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }
}

/// Run a list of instructions over an N-indexed environment, starting at PC
/// `start` (the first instruction's PC) from state `(pc, env)`.
pub fn mmn_run(
    instrs: &[MMInstr],
    start: usize,
    pc: usize,
    env: RegEnv,
    fuel: u64,
) -> RunOutcome<(usize, RegEnv)> {
    let mut pc = pc;
    let mut env = env;
    let mut steps = 0u64;
    loop {
        if pc < start || start + instrs.len() <= pc {
            return RunOutcome::Halted {
                state: (pc, env),
                steps,
            };
        }
        if steps == fuel {
            return RunOutcome::OutOfFuel { state: (pc, env) };
        }
        steps += 1;
        match instrs[pc - start] {
            MMInstr::Inc(r) => {
                env.set(r, env.get(r) + 1);
                pc += 1;
            }
            MMInstr::Dec(r, j) => {
                let v = env.get(r);
                if v > 0 {
                    env.set(r, v - 1);
                    pc += 1;
                } else {
                    pc = j;
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// mu-rec -> MM
// ---------------------------------------------------------------------------

/// Jump targets that may be resolved later.
#[derive(Debug, Clone, Copy)]
enum Tgt {
    Abs(usize),
    Label(usize),
}

#[derive(Debug, Clone, Copy)]
enum EInstr {
    Inc(usize),
    Dec(usize, Tgt),
}

/// Instruction emitter with absolute PCs and forward labels.
struct Emitter {
    base: usize,
    instrs: Vec<EInstr>,
    labels: Vec<Option<usize>>,
}

impl Emitter {
    fn new(base: usize) -> Self {
        Emitter {
            base,
            instrs: Vec::new(),
            labels: Vec::new(),
        }
    }

    fn pc(&self) -> usize {
        self.base + self.instrs.len()
    }

    fn new_label(&mut self) -> usize {
        self.labels.push(None);
        self.labels.len() - 1
    }

    fn bind(&mut self, label: usize) {
        debug_assert!(self.labels[label].is_none());
        self.labels[label] = Some(self.pc());
    }

    fn inc(&mut self, r: usize) {
        self.instrs.push(EInstr::Inc(r));
    }

    fn dec(&mut self, r: usize, t: Tgt) {
        self.instrs.push(EInstr::Dec(r, t));
    }

    fn finish(self) -> Vec<MMInstr> {
        self.instrs
            .into_iter()
            .map(|i| match i {
                EInstr::Inc(r) => MMInstr::Inc(r),
                EInstr::Dec(r, Tgt::Abs(t)) => MMInstr::Dec(r, t),
                EInstr::Dec(r, Tgt::Label(l)) => {
                    MMInstr::Dec(r, self.labels[l].expect("unbound label"))
                }
            })
            .collect()
    }

    // --- gadgets; `z` is a register known to hold 0 throughout ---

    /// Unconditional jump via a zero register.
    fn jump(&mut self, z: usize, t: Tgt) {
        self.dec(z, t);
    }

    /// Set register `r` to 0.
    fn zero(&mut self, r: usize, z: usize) {
        let top = self.pc();
        let out = self.new_label();
        self.dec(r, Tgt::Label(out));
        self.jump(z, Tgt::Abs(top));
        self.bind(out);
    }

    /// Add `src` into `dst`, leaving `src` at 0. Requires `src != dst`.
    fn transfer(&mut self, src: usize, dst: usize, z: usize) {
        debug_assert_ne!(src, dst);
        let top = self.pc();
        let out = self.new_label();
        self.dec(src, Tgt::Label(out));
        self.inc(dst);
        self.jump(z, Tgt::Abs(top));
        self.bind(out);
    }

    /// Add `src` into both `d1` and `d2`, leaving `src` at 0.
    fn transfer2(&mut self, src: usize, d1: usize, d2: usize, z: usize) {
        debug_assert!(src != d1 && src != d2 && d1 != d2);
        let top = self.pc();
        let out = self.new_label();
        self.dec(src, Tgt::Label(out));
        self.inc(d1);
        self.inc(d2);
        self.jump(z, Tgt::Abs(top));
        self.bind(out);
    }

    /// Add `src` into `dst` preserving `src`, using a zero temporary `tmp`
    /// (restored to 0).
    fn copy(&mut self, src: usize, dst: usize, tmp: usize, z: usize) {
        self.transfer2(src, dst, tmp, z);
        self.transfer(tmp, src, z);
    }
}

/// Compile `f` (arity `k`) into `em`, with inputs in registers
/// `p..p+k`, output register `o`, and zero spare registers `s..`. The block
/// must run from its first PC to one past its last, leaving every register
/// except `o` at its entry value and `o` holding the result; it diverges
/// exactly when `f` has no value on the inputs.
///
/// The register `s` itself is reserved as the always-zero register for
/// unconditional jumps, so gadget spares start at `s + 1`.
fn compile(f: &RecAlg, em: &mut Emitter, p: usize, o: usize, s: usize) {
    let z = s; // never incremented anywhere
    let sp = s + 1; // first usable spare
    match f {
        RecAlg::Cst(n) => {
            em.zero(o, z);
            for _ in 0..*n {
                em.inc(o);
            }
        }
        RecAlg::Zero => {
            em.zero(o, z);
        }
        RecAlg::Succ => {
            em.zero(o, z);
            em.copy(p, o, sp, z);
            em.inc(o);
        }
        RecAlg::Proj(_, j) => {
            em.zero(o, z);
            em.copy(p + j, o, sp, z);
        }
        RecAlg::Comp(_, f, gs) => {
            // Result slots w_j at sp..sp+k, then compile f on them.
            let k = gs.len();
            for (j, g) in gs.iter().enumerate() {
                compile(g, em, p, sp + j, sp + k);
            }
            compile(f, em, sp, o, sp + k);
            for j in 0..k {
                em.zero(sp + j, z);
            }
        }
        RecAlg::Rec(f, g) => {
            // Inputs: x at p, v at p+1..p+1+kf.
            let kf = f.arity().expect("well-typed") ;
            let c = sp; // countdown copy of x
            let pg = sp + 1; // g's argument block: n, y, then v copies
            let n_reg = pg;
            let y_reg = pg + 1;
            let vcopy = pg + 2;
            let s2 = pg + 2 + kf; // spares beyond g's argument block
            // o := f(v)
            em.zero(o, z);
            compile(f, em, p + 1, o, s2);
            // c := x, v copies for g
            em.copy(p, c, s2 + 1, z);
            for j in 0..kf {
                em.copy(p + 1 + j, vcopy + j, s2 + 1, z);
            }
            // loop: while c > 0 { y := o; o := g(n, y, v); y := 0; n += 1 }
            let top = em.pc();
            let done = em.new_label();
            em.dec(c, Tgt::Label(done));
            em.transfer(o, y_reg, z);
            compile(g, em, pg, o, s2);
            em.zero(y_reg, z);
            em.inc(n_reg);
            em.jump(z, Tgt::Abs(top));
            em.bind(done);
            // cleanup: n holds x, v copies hold v
            em.zero(n_reg, z);
            for j in 0..kf {
                em.zero(vcopy + j, z);
            }
        }
        RecAlg::Min(f) => {
            // Whole arity k; f takes (x :: v).
            let k = f.arity().expect("well-typed") - 1;
            let r = sp; // f's output
            let pf = sp + 1; // f's argument block: candidate x, then v copies
            let x_reg = pf;
            let vcopy = pf + 1;
            let s2 = pf + 1 + k;
            for j in 0..k {
                em.copy(p + j, vcopy + j, s2 + 1, z);
            }
            let top = em.pc();
            let found = em.new_label();
            compile(f, em, pf, r, s2);
            em.dec(r, Tgt::Label(found));
            em.zero(r, z);
            em.inc(x_reg);
            em.jump(z, Tgt::Abs(top));
            em.bind(found);
            em.zero(o, z);
            em.transfer(x_reg, o, z);
            for j in 0..k {
                em.zero(vcopy + j, z);
            }
        }
    }
}

/// Compile `f` to instructions over N-indexed registers: first instruction
/// at PC `i`, inputs at `p..p+k`, output at `o`, spares (all zero, restored)
/// from `m` upward.
pub fn ra_to_mm(
    f: &RecAlg,
    i: usize,
    p: usize,
    o: usize,
    m: usize,
) -> Result<Vec<MMInstr>, CompileError> {
    let k = f
        .arity()
        .map_err(|e| CompileError::IllTyped(e.to_string()))?;
    if !(o < m) || (p <= o && o < k + p) || !(k + p <= m) {
        return Err(CompileError::Layout(format!(
            "need o < m, o outside [p, p+k), k+p <= m; got k={k} i={i} p={p} o={o} m={m}"
        )));
    }
    let mut em = Emitter::new(i);
    compile(f, &mut em, p, o, m);
    Ok(em.finish())
}

/// Largest register index mentioned by the instructions.
fn max_register(instrs: &[MMInstr]) -> usize {
    instrs
        .iter()
        .map(|i| match i {
            MMInstr::Inc(r) => *r,
            MMInstr::Dec(r, _) => *r,
        })
        .max()
        .unwrap_or(0)
}

/// Build a finite Minsky machine simulating `f` of arity `k`: starting from
/// `(1, v ++ zeros)`, the machine halts iff `f` has a value on `v`, and that
/// value is then in register `k`. Returns the spare-register count `n`; the
/// machine has `k + 1 + n` registers.
pub fn ra_mm_simulator(f: &RecAlg) -> Result<(usize, MMProg), CompileError> {
    let k = f
        .arity()
        .map_err(|e| CompileError::IllTyped(e.to_string()))?;
    let instrs = ra_to_mm(f, 1, 0, k, k + 1)?;
    let regs = max_register(&instrs).max(k) + 1;
    Ok((
        regs - (k + 1),
        MMProg {
            start: 1,
            regs,
            instrs,
        },
    ))
}

/// Report for a mu-rec compilation.
pub fn ra_mm_report(f: &RecAlg) -> Result<CompileReport, CompileError> {
    let (n, prog) = ra_mm_simulator(f)?;
    Ok(CompileReport {
        source_size: ra_size(f),
        target_size: prog.instrs.len(),
        register_budget: prog.regs,
        spare_registers: n,
    })
}

fn ra_size(f: &RecAlg) -> usize {
    match f {
        RecAlg::Cst(_) | RecAlg::Zero | RecAlg::Succ | RecAlg::Proj(_, _) => 1,
        RecAlg::Comp(_, f, gs) => 1 + ra_size(f) + gs.iter().map(ra_size).sum::<usize>(),
        RecAlg::Rec(f, g) => 1 + ra_size(f) + ra_size(g),
        RecAlg::Min(f) => 1 + ra_size(f),
    }
}

/// Report for an MM -> FRACTRAN compilation.
pub fn mm_fractran_report(prog: &MMProg, target: &FractranProg) -> CompileReport {
    CompileReport {
        source_size: prog.instrs.len(),
        target_size: target.fractions.len(),
        register_budget: prog.regs,
        spare_registers: 0,
    }
}

/// Convenience: has the Godel encoding `p_pc * prod q_j^v_j` as the identity
/// check needs, decode a FRACTRAN state back into an MM state with `n`
/// registers. Returns `None` when the number is not a valid encoding.
pub fn godel_decode(x: &Nat, max_pc: usize, n: usize) -> Option<MMState> {
    let mut x = x.clone();
    let mut regs = vec![0u64; n];
    for (j, reg) in regs.iter_mut().enumerate() {
        let q = nat(reg_prime(j));
        while (&x % &q) == Nat::from(0u32) {
            x /= &q;
            *reg += 1;
        }
    }
    for pc in 0..=max_pc {
        if x == nat(state_prime(pc)) {
            return Some(MMState { pc, regs });
        }
    }
    None
}
