//! Mu-recursive algorithms with a cost-aware, fuel-bounded evaluator.
//!
//! Terms follow the classical typed presentation: `Cst n` has arity 0,
//! `Zero`/`Succ` arity 1, `Proj(k, p)` arity `k`, composition `Comp(i, f, gs)`
//! has arity `i` (each `g` has arity `i` and `f` has arity `gs.len()`),
//! primitive recursion `Rec(f, g)` lifts `f : k` and `g : 2+k` to arity `1+k`,
//! and minimization `Min(f)` lowers `f : 1+k` to arity `k`.
//!
//! The fuel discipline of `ra_eval` matches the step-indexed skeleton
//! evaluator (`skel_eval`) rule for rule, so the two agree exactly, including
//! on fuel exhaustion.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A mu-recursive algorithm. Arity annotations are carried exactly where the
/// term itself does not determine them (`Proj` and `Comp`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecAlg {
    /// The constant `n`, arity 0.
    #[serde(rename = "CST")]
    Cst(u64),
    /// The constant-zero function, arity 1.
    #[serde(rename = "ZERO")]
    Zero,
    /// The successor function, arity 1.
    #[serde(rename = "SUCC")]
    Succ,
    /// `Proj(k, p)`: the `p`-th projection out of `k` arguments.
    #[serde(rename = "PROJ")]
    Proj(usize, usize),
    /// `Comp(i, f, gs)`: apply each `g` (arity `i`) to the inputs, then `f`
    /// (arity `gs.len()`) to the results. Whole term has arity `i`.
    #[serde(rename = "COMP")]
    Comp(usize, Box<RecAlg>, Vec<RecAlg>),
    /// Primitive recursion on the first argument.
    #[serde(rename = "REC")]
    Rec(Box<RecAlg>, Box<RecAlg>),
    /// Unbounded search for the least first argument on which `f` returns 0.
    #[serde(rename = "MIN")]
    Min(Box<RecAlg>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RaError {
    #[error("ill-typed term: {0}")]
    IllTyped(String),
    #[error("arity mismatch: term has arity {arity}, got {got} arguments")]
    Arity { arity: usize, got: usize },
}

impl RecAlg {
    /// The arity of a well-typed term, or an error describing the violated
    /// typing rule.
    pub fn arity(&self) -> Result<usize, RaError> {
        match self {
            RecAlg::Cst(_) => Ok(0),
            RecAlg::Zero | RecAlg::Succ => Ok(1),
            RecAlg::Proj(k, p) => {
                if p < k {
                    Ok(*k)
                } else {
                    Err(RaError::IllTyped(format!("proj index {p} out of {k}")))
                }
            }
            RecAlg::Comp(i, f, gs) => {
                let fa = f.arity()?;
                if fa != gs.len() {
                    return Err(RaError::IllTyped(format!(
                        "comp head has arity {fa} but {} arguments are supplied",
                        gs.len()
                    )));
                }
                for g in gs {
                    let ga = g.arity()?;
                    if ga != *i {
                        return Err(RaError::IllTyped(format!(
                            "comp argument has arity {ga}, expected {i}"
                        )));
                    }
                }
                Ok(*i)
            }
            RecAlg::Rec(f, g) => {
                let fa = f.arity()?;
                let ga = g.arity()?;
                if ga != 2 + fa {
                    return Err(RaError::IllTyped(format!(
                        "rec step has arity {ga}, expected {}",
                        2 + fa
                    )));
                }
                Ok(1 + fa)
            }
            RecAlg::Min(f) => {
                let fa = f.arity()?;
                if fa == 0 {
                    return Err(RaError::IllTyped("min of a nullary term".into()));
                }
                Ok(fa - 1)
            }
        }
    }
}

/// Evaluate the vector of arguments of a composition at fuel `c`. The fuel
/// accounting mirrors the cons/nil chain of the skeleton evaluator: each list
/// node, including the terminating nil, costs one unit.
fn eval_vec(gs: &[RecAlg], c: u64, v: &[u64]) -> Option<Vec<u64>> {
    if c == 0 {
        return None;
    }
    match gs.split_first() {
        None => Some(Vec::new()),
        Some((g, rest)) => {
            let x = eval(g, c - 1, v)?;
            let mut tail = eval_vec(rest, c - 1, v)?;
            tail.insert(0, x);
            Some(tail)
        }
    }
}

fn eval(t: &RecAlg, c: u64, v: &[u64]) -> Option<u64> {
    if c == 0 {
        return None;
    }
    match t {
        RecAlg::Cst(n) => Some(*n),
        RecAlg::Zero => Some(0),
        RecAlg::Succ => v[0].checked_add(1),
        RecAlg::Proj(_, p) => Some(v[*p]),
        RecAlg::Comp(_, f, gs) => {
            let w = eval_vec(gs, c - 1, v)?;
            eval(f, c - 1, &w)
        }
        RecAlg::Rec(f, g) => {
            // Iterative form of the unrolling rule.  Peeling the counter from
            // x down to 0 costs one fuel unit per step, so the base case runs
            // at fuel c - 1 - x and the step for counter value i at fuel
            // c - x + i; when c <= x the innermost call hits fuel zero.
            let (x, l) = v.split_first().expect("rec is at least unary");
            if c <= *x {
                return None;
            }
            let base = c - 1 - *x;
            let mut y = eval(f, base, l)?;
            let mut args = Vec::with_capacity(v.len() + 1);
            for i in 0..*x {
                args.clear();
                args.push(i);
                args.push(y);
                args.extend_from_slice(l);
                y = eval(g, base + 1 + i, &args)?;
            }
            Some(y)
        }
        RecAlg::Min(f) => {
            // Iterative form of the tail-recursive search rule: candidate m
            // is tried at fuel (incoming fuel) - 1 - m.
            let mut fuel = c;
            let mut m = 0u64;
            let mut args = Vec::with_capacity(v.len() + 1);
            loop {
                if fuel == 0 {
                    return None;
                }
                fuel -= 1;
                args.clear();
                args.push(m);
                args.extend_from_slice(v);
                match eval(f, fuel, &args)? {
                    0 => return Some(m),
                    _ => m += 1,
                }
            }
        }
    }
}

/// Evaluate `f` on argument vector `v` with the given fuel. `Ok(None)` means
/// the fuel was exhausted (or the search diverges); `Ok(Some(x))` is the
/// value. Arity violations and ill-typed terms are reported as errors.
pub fn ra_eval(f: &RecAlg, v: &[u64], fuel: u64) -> Result<Option<u64>, RaError> {
    let arity = f.arity()?;
    if arity != v.len() {
        return Err(RaError::Arity {
            arity,
            got: v.len(),
        });
    }
    Ok(eval(f, fuel, v))
}
