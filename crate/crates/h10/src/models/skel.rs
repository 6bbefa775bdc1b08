//! The untyped syntactic skeleton of mu-recursive algorithms and its
//! step-indexed evaluator.
//!
//! The skeleton mirrors the typed constructors without arities and adds
//! `Nil`/`Cons` so that the argument vectors of compositions become ordinary
//! subterms. Evaluation is total: `None` covers fuel exhaustion, divergence
//! and invalid skeletons alike.

use crate::models::recalg::RecAlg;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecSkel {
    Cst(u64),
    Zero,
    Succ,
    Proj(usize),
    Comp(Box<RecSkel>, Box<RecSkel>),
    Rec(Box<RecSkel>, Box<RecSkel>),
    Min(Box<RecSkel>),
    Nil,
    Cons(Box<RecSkel>, Box<RecSkel>),
}

/// Result of a successful skeleton evaluation: a number for function
/// skeletons, a list for vector skeletons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkelOut {
    Inl(u64),
    Inr(Vec<u64>),
}

/// Forget the typing of a mu-recursive algorithm; composition vectors become
/// `Cons` chains ending in `Nil`.
pub fn skel_erase(f: &RecAlg) -> RecSkel {
    match f {
        RecAlg::Cst(n) => RecSkel::Cst(*n),
        RecAlg::Zero => RecSkel::Zero,
        RecAlg::Succ => RecSkel::Succ,
        RecAlg::Proj(_, p) => RecSkel::Proj(*p),
        RecAlg::Comp(_, f, gs) => {
            let mut chain = RecSkel::Nil;
            for g in gs.iter().rev() {
                chain = RecSkel::Cons(Box::new(skel_erase(g)), Box::new(chain));
            }
            RecSkel::Comp(Box::new(skel_erase(f)), Box::new(chain))
        }
        RecAlg::Rec(f, g) => RecSkel::Rec(Box::new(skel_erase(f)), Box::new(skel_erase(g))),
        RecAlg::Min(f) => RecSkel::Min(Box::new(skel_erase(f))),
    }
}

/// Step-indexed evaluation with fuel `c`, search counter `m` and input list
/// `l`. Every rule consumes one unit of fuel; all unmatched cases (including
/// fuel 0) yield `None`.
pub fn skel_eval(f: &RecSkel, c: u64, m: u64, l: &[u64]) -> Option<SkelOut> {
    if c == 0 {
        return None;
    }
    match f {
        RecSkel::Cst(n) => Some(SkelOut::Inl(*n)),
        RecSkel::Zero => Some(SkelOut::Inl(0)),
        RecSkel::Succ => {
            let x = l.first()?;
            Some(SkelOut::Inl(x.checked_add(1)?))
        }
        RecSkel::Proj(p) => Some(SkelOut::Inl(*l.get(*p)?)),
        RecSkel::Comp(f, g) => {
            let lp = match skel_eval(g, c - 1, m, l)? {
                SkelOut::Inr(lp) => lp,
                SkelOut::Inl(_) => return None,
            };
            match skel_eval(f, c - 1, m, &lp)? {
                SkelOut::Inl(x) => Some(SkelOut::Inl(x)),
                SkelOut::Inr(_) => None,
            }
        }
        RecSkel::Rec(f, g) => {
            let (x, rest) = l.split_first()?;
            if *x == 0 {
                match skel_eval(f, c - 1, m, rest)? {
                    SkelOut::Inl(v) => Some(SkelOut::Inl(v)),
                    SkelOut::Inr(_) => None,
                }
            } else {
                let mut prev = Vec::with_capacity(l.len());
                prev.push(x - 1);
                prev.extend_from_slice(rest);
                let y = match skel_eval(&RecSkel::Rec(f.clone(), g.clone()), c - 1, m, &prev)? {
                    SkelOut::Inl(y) => y,
                    SkelOut::Inr(_) => return None,
                };
                let mut args = Vec::with_capacity(l.len() + 1);
                args.push(x - 1);
                args.push(y);
                args.extend_from_slice(rest);
                match skel_eval(g, c - 1, m, &args)? {
                    SkelOut::Inl(v) => Some(SkelOut::Inl(v)),
                    SkelOut::Inr(_) => None,
                }
            }
        }
        RecSkel::Min(f) => {
            // Tail-recursive search unrolled into a loop: the body is always
            // evaluated with its own counter reset to 0.
            let mut fuel = c;
            let mut m = m;
            let mut args = Vec::with_capacity(l.len() + 1);
            loop {
                if fuel == 0 {
                    return None;
                }
                fuel -= 1;
                args.clear();
                args.push(m);
                args.extend_from_slice(l);
                match skel_eval(f, fuel, 0, &args)? {
                    SkelOut::Inl(0) => return Some(SkelOut::Inl(m)),
                    SkelOut::Inl(_) => m += 1,
                    SkelOut::Inr(_) => return None,
                }
            }
        }
        RecSkel::Nil => Some(SkelOut::Inr(Vec::new())),
        RecSkel::Cons(f, g) => {
            let x = match skel_eval(f, c - 1, m, l)? {
                SkelOut::Inl(x) => x,
                SkelOut::Inr(_) => return None,
            };
            let mut tail = match skel_eval(g, c - 1, m, l)? {
                SkelOut::Inr(t) => t,
                SkelOut::Inl(_) => return None,
            };
            tail.insert(0, x);
            Some(SkelOut::Inr(tail))
        }
    }
}
