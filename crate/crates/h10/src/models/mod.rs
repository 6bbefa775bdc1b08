//! Syntax and fuel-bounded operational semantics for the four computation
//! models: Minsky machines, FRACTRAN, mu-recursive algorithms and the weak
//! call-by-value lambda calculus, plus the untyped skeleton of mu-recursive
//! algorithms with its step-indexed evaluator.

pub mod fractran;
pub mod lterm;
pub mod mm;
pub mod recalg;
pub mod skel;

pub use fractran::{fractran_run, fractran_step, FractranProg};
pub use lterm::{l_eval, scott_decode_list, scott_decode_nat, scott_encode_list, scott_encode_nat, LTerm};
pub use mm::{mm_out_code, mm_run, mm_step, MMInstr, MMProg, MMState};
pub use recalg::{ra_eval, RecAlg};
pub use skel::{skel_erase, skel_eval, RecSkel, SkelOut};

/// Result of running a fuel-bounded semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome<S> {
    /// The machine got stuck (halted) after exactly `steps <= fuel` steps.
    Halted { state: S, steps: u64 },
    /// Fuel ran out with the machine still live in `state`.
    OutOfFuel { state: S },
}

impl<S> RunOutcome<S> {
    pub fn halted(self) -> Option<(S, u64)> {
        match self {
            RunOutcome::Halted { state, steps } => Some((state, steps)),
            RunOutcome::OutOfFuel { .. } => None,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, RunOutcome::Halted { .. })
    }
}
