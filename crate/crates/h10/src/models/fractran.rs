//! FRACTRAN programs and their small-step semantics.
//!
//! A program is a list of formal fractions `p/q` over the natural numbers.
//! From a state `x`, the first fraction whose denominator divides `p * x`
//! fires and the new state is `p * x / q`; if no fraction fires the program
//! is stuck (halted).

use num_traits::Zero;

use crate::models::RunOutcome;
use crate::Nat;

/// A FRACTRAN program: an ordered list of fractions `(numerator, denominator)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractranProg {
    pub fractions: Vec<(Nat, Nat)>,
}

impl FractranProg {
    pub fn new(fractions: Vec<(Nat, Nat)>) -> Self {
        FractranProg { fractions }
    }

    /// A program is regular when no denominator is zero. Compiled programs
    /// are always regular; the interpreter itself tolerates `q = 0` by
    /// treating `0 | n` as `n = 0`.
    pub fn is_regular(&self) -> bool {
        self.fractions.iter().all(|(_, q)| !q.is_zero())
    }
}

/// `q` divides `n`, with the convention that `0` divides only `0`.
fn divides(q: &Nat, n: &Nat) -> bool {
    if q.is_zero() {
        n.is_zero()
    } else {
        (n % q).is_zero()
    }
}

/// One FRACTRAN step from `x`: the first applicable fraction fires.
/// Returns `None` when the program is stuck at `x`.
pub fn fractran_step(prog: &FractranProg, x: &Nat) -> Option<Nat> {
    for (p, q) in &prog.fractions {
        let px = p * x;
        if divides(q, &px) {
            if q.is_zero() {
                // q = 0 forces p * x = 0; the successor 0/0 is taken as 0.
                return Some(Nat::zero());
            }
            return Some(px / q);
        }
    }
    None
}

/// Run for at most `fuel` steps, reporting the halting state and the exact
/// number of steps taken, or the state reached when fuel runs out.
pub fn fractran_run(prog: &FractranProg, x: Nat, fuel: u64) -> RunOutcome<Nat> {
    let mut state = x;
    let mut steps = 0u64;
    loop {
        match fractran_step(prog, &state) {
            None => return RunOutcome::Halted { state, steps },
            Some(next) => {
                if steps == fuel {
                    return RunOutcome::OutOfFuel { state };
                }
                state = next;
                steps += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    fn prog(fr: &[(u64, u64)]) -> FractranProg {
        FractranProg::new(fr.iter().map(|&(p, q)| (nat(p), nat(q))).collect())
    }

    #[test]
    fn step_picks_first_applicable_fraction() {
        // 5/7 applies to 7; 2/1 applies to everything.
        let p = prog(&[(5, 7), (2, 1)]);
        assert_eq!(fractran_step(&p, &nat(7)), Some(nat(5)));
        assert_eq!(fractran_step(&p, &nat(5)), Some(nat(10)));
        assert_eq!(fractran_step(&p, &nat(1)), Some(nat(2)));
    }

    #[test]
    fn empty_program_is_stuck_everywhere() {
        let p = prog(&[]);
        assert_eq!(fractran_step(&p, &nat(0)), None);
        assert_eq!(fractran_step(&p, &nat(12)), None);
        match fractran_run(&p, nat(12), 100) {
            RunOutcome::Halted { state, steps } => {
                assert_eq!(state, nat(12));
                assert_eq!(steps, 0);
            }
            _ => panic!("expected halt"),
        }
    }

    #[test]
    fn run_counts_steps_exactly() {
        // 3/2 maps 2 -> 3 and is then stuck (2 does not divide 9).
        let p = prog(&[(3, 2)]);
        match fractran_run(&p, nat(2), 10) {
            RunOutcome::Halted { state, steps } => {
                assert_eq!(state, nat(3));
                assert_eq!(steps, 1);
            }
            _ => panic!("expected halt"),
        }
        // 4 -> 6 -> 9, two steps.
        match fractran_run(&p, nat(4), 10) {
            RunOutcome::Halted { state, steps } => {
                assert_eq!(state, nat(9));
                assert_eq!(steps, 2);
            }
            _ => panic!("expected halt"),
        }
    }

    #[test]
    fn run_out_of_fuel_reports_reached_state() {
        let p = prog(&[(2, 1)]);
        match fractran_run(&p, nat(1), 5) {
            RunOutcome::OutOfFuel { state } => assert_eq!(state, nat(32)),
            _ => panic!("expected out of fuel"),
        }
        // Zero fuel on a non-stuck state is immediately out of fuel.
        match fractran_run(&p, nat(1), 0) {
            RunOutcome::OutOfFuel { state } => assert_eq!(state, nat(1)),
            _ => panic!("expected out of fuel"),
        }
    }

    #[test]
    fn zero_denominator_convention() {
        // 0 divides only 0.
        let p = prog(&[(3, 0)]);
        assert_eq!(fractran_step(&p, &nat(5)), None);
        assert_eq!(fractran_step(&p, &nat(0)), Some(nat(0)));
        assert!(!p.is_regular());
        assert!(prog(&[(3, 2), (0, 1)]).is_regular());
    }
}
