//! Weak call-by-value lambda calculus over de Bruijn terms, with Scott
//! encodings of numbers and lists.
//!
//! Evaluation is deterministic: applications evaluate the function, then the
//! argument, then beta-reduce. Only closed terms are evaluated, and values
//! substituted during beta-reduction are always closed, so no variable
//! capture can occur.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LTerm {
    #[serde(rename = "VAR")]
    Var(usize),
    #[serde(rename = "APP")]
    App(Box<LTerm>, Box<LTerm>),
    #[serde(rename = "LAM")]
    Lam(Box<LTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LError {
    #[error("term is not closed (free variable under {0} binders)")]
    Open(usize),
}

/// Outcome of fuel-bounded evaluation. `Stuck` means a non-abstraction ended
/// up in function position; on closed terms that cannot happen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LOutcome {
    Value(LTerm),
    OutOfFuel,
    Stuck,
}

impl LTerm {
    pub fn app(f: LTerm, a: LTerm) -> LTerm {
        LTerm::App(Box::new(f), Box::new(a))
    }

    pub fn lam(body: LTerm) -> LTerm {
        LTerm::Lam(Box::new(body))
    }

    /// All variables bound, assuming `depth` enclosing binders.
    pub fn closed_under(&self, depth: usize) -> bool {
        match self {
            LTerm::Var(n) => *n < depth,
            LTerm::App(f, a) => f.closed_under(depth) && a.closed_under(depth),
            LTerm::Lam(b) => b.closed_under(depth + 1),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.closed_under(0)
    }
}

/// Substitute the closed value `v` for variable `k` in `t`. Since `v` is
/// closed it needs no lifting when pushed under binders.
fn subst(t: &LTerm, k: usize, v: &LTerm) -> LTerm {
    debug_assert!(v.is_closed(), "wcbv substitutes closed values only");
    match t {
        LTerm::Var(n) if *n == k => v.clone(),
        LTerm::Var(n) => LTerm::Var(*n),
        LTerm::App(f, a) => LTerm::app(subst(f, k, v), subst(a, k, v)),
        LTerm::Lam(b) => LTerm::lam(subst(b, k + 1, v)),
    }
}

fn eval(t: &LTerm, fuel: &mut u64) -> LOutcome {
    match t {
        LTerm::Lam(_) => LOutcome::Value(t.clone()),
        LTerm::Var(_) => LOutcome::Stuck,
        LTerm::App(f, a) => {
            let fv = match eval(f, fuel) {
                LOutcome::Value(v) => v,
                other => return other,
            };
            let av = match eval(a, fuel) {
                LOutcome::Value(v) => v,
                other => return other,
            };
            match fv {
                LTerm::Lam(body) => {
                    if *fuel == 0 {
                        return LOutcome::OutOfFuel;
                    }
                    *fuel -= 1;
                    eval(&subst(&body, 0, &av), fuel)
                }
                _ => LOutcome::Stuck,
            }
        }
    }
}

/// Evaluate a closed term, counting beta steps against `fuel`.
pub fn l_eval(t: &LTerm, fuel: u64) -> Result<LOutcome, LError> {
    if !t.is_closed() {
        return Err(LError::Open(0));
    }
    let mut fuel = fuel;
    Ok(eval(t, &mut fuel))
}

/// Scott numeral: 0 = \z.\s. z and 1+n = \z.\s. s n.
pub fn scott_encode_nat(mut n: u64) -> LTerm {
    let mut t = LTerm::lam(LTerm::lam(LTerm::Var(1)));
    while n > 0 {
        t = LTerm::lam(LTerm::lam(LTerm::app(LTerm::Var(0), t)));
        n -= 1;
    }
    t
}

/// Scott list: [] = \n.\c. n and x :: xs = \n.\c. c x xs.
pub fn scott_encode_list(xs: &[u64]) -> LTerm {
    let mut t = LTerm::lam(LTerm::lam(LTerm::Var(1)));
    for &x in xs.iter().rev() {
        t = LTerm::lam(LTerm::lam(LTerm::app(
            LTerm::app(LTerm::Var(0), scott_encode_nat(x)),
            t,
        )));
    }
    t
}

/// Case arm selecting the constructor tag: applying an encoded value to
/// `tru`/`fls`-style arms and evaluating tells the two constructors apart.
fn tru() -> LTerm {
    LTerm::lam(LTerm::lam(LTerm::Var(1)))
}

fn fls() -> LTerm {
    LTerm::lam(LTerm::lam(LTerm::Var(0)))
}

/// Decode a Scott numeral by repeated case analysis under the evaluator.
/// Returns `None` when the term does not evaluate to a numeral within fuel.
pub fn scott_decode_nat(t: &LTerm, fuel: u64) -> Option<u64> {
    let mut cur = match l_eval(t, fuel).ok()? {
        LOutcome::Value(v) => v,
        _ => return None,
    };
    let mut n = 0u64;
    loop {
        // cur Z S with Z = tru, S = \p. fls: tru on a numeral 0, fls otherwise.
        let tag = LTerm::app(LTerm::app(cur.clone(), tru()), LTerm::lam(fls()));
        match l_eval(&tag, fuel).ok()? {
            LOutcome::Value(v) if v == tru() => return Some(n),
            LOutcome::Value(v) if v == fls() => {}
            _ => return None,
        }
        // Predecessor: cur Z S with S = identity.
        let pred = LTerm::app(LTerm::app(cur, tru()), LTerm::lam(LTerm::Var(0)));
        cur = match l_eval(&pred, fuel).ok()? {
            LOutcome::Value(v) => v,
            _ => return None,
        };
        n = n.checked_add(1)?;
    }
}

/// Decode a Scott list of numerals by repeated case analysis.
pub fn scott_decode_list(t: &LTerm, fuel: u64) -> Option<Vec<u64>> {
    let mut cur = match l_eval(t, fuel).ok()? {
        LOutcome::Value(v) => v,
        _ => return None,
    };
    let mut out = Vec::new();
    loop {
        let tag = LTerm::app(
            LTerm::app(cur.clone(), tru()),
            LTerm::lam(LTerm::lam(fls())),
        );
        match l_eval(&tag, fuel).ok()? {
            LOutcome::Value(v) if v == tru() => return Some(out),
            LOutcome::Value(v) if v == fls() => {}
            _ => return None,
        }
        // Head: arms (dummy, \x.\xs. x); tail: arms (dummy, \x.\xs. xs).
        let head = LTerm::app(
            LTerm::app(cur.clone(), tru()),
            LTerm::lam(LTerm::lam(LTerm::Var(1))),
        );
        let head = match l_eval(&head, fuel).ok()? {
            LOutcome::Value(v) => v,
            _ => return None,
        };
        out.push(scott_decode_nat(&head, fuel)?);
        let tail = LTerm::app(
            LTerm::app(cur, tru()),
            LTerm::lam(LTerm::lam(LTerm::Var(0))),
        );
        cur = match l_eval(&tail, fuel).ok()? {
            LOutcome::Value(v) => v,
            _ => return None,
        };
    }
}
