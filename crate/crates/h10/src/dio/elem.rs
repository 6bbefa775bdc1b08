//! Elementary Diophantine constraints: flat equations over one pool of
//! solution variables `u_0, u_1, ...` and one pool of parameters
//! `x_0, x_1, ...`, plus the translation from formulas to constraint lists.

use crate::dio::logic::{df_eval_naive, DioForm, Valuation};
use crate::{nat, Nat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// One elementary constraint.  Solution variables are written `u`, `v`, `w`
/// and parameters `x_i`; every constraint pins one solution variable against
/// at most one addition or multiplication.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DioCstr {
    /// `u = n`
    #[serde(rename = "CST")]
    EqCst(usize, u64),
    /// `u = v`
    #[serde(rename = "VAR")]
    EqU(usize, usize),
    /// `u = x_i`
    #[serde(rename = "PARAM")]
    EqParam(usize, usize),
    /// `u = v + w`
    #[serde(rename = "ADD")]
    EqAdd(usize, usize, usize),
    /// `u = v * w`
    #[serde(rename = "MUL")]
    EqMul(usize, usize, usize),
}

/// Evaluate one constraint under a parameter valuation and a solution-variable
/// assignment (missing entries read as zero).
pub fn cstr_eval(c: &DioCstr, nu: &Valuation, phi: &[Nat]) -> bool {
    let get = |u: usize| phi.get(u).cloned().unwrap_or_else(Nat::zero);
    match c {
        DioCstr::EqCst(u, n) => get(*u) == nat(*n),
        DioCstr::EqU(u, v) => get(*u) == get(*v),
        DioCstr::EqParam(u, i) => get(*u) == nu.get(*i),
        DioCstr::EqAdd(u, v, w) => get(*u) == get(*v) + get(*w),
        DioCstr::EqMul(u, v, w) => get(*u) == get(*v) * get(*w),
    }
}

/// Simultaneous satisfaction of a list of constraints.
pub fn cstrs_eval(l: &[DioCstr], nu: &Valuation, phi: &[Nat]) -> bool {
    l.iter().all(|c| cstr_eval(c, nu, phi))
}

/// Constraint-list encoding of a formula: a reference variable `r` and a
/// list of constraints whose variables live in `[lo, lo + width)` such that
/// the list is always satisfiable, and prefixing `r = 0` makes it equivalent
/// to the source formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemRepr {
    pub cstrs: Vec<DioCstr>,
    pub r: usize,
    pub lo: usize,
    pub width: usize,
}

impl ElemRepr {
    /// `(r = 0)` prefixed to the constraint list: satisfiable exactly when
    /// the source formula holds.
    pub fn zero_test(&self) -> Vec<DioCstr> {
        let mut l = Vec::with_capacity(self.cstrs.len() + 1);
        l.push(DioCstr::EqCst(self.r, 0));
        l.extend(self.cstrs.iter().cloned());
        l
    }
}

/// Substitute parameters inside a constraint when crossing a binder: the
/// bound `x_0` becomes the solution variable `witness` and `x_{1+i}` drops
/// to `x_i`.
fn subst_binder(c: &DioCstr, witness: usize) -> DioCstr {
    match c {
        DioCstr::EqParam(u, 0) => DioCstr::EqU(*u, witness),
        DioCstr::EqParam(u, i) => DioCstr::EqParam(*u, i - 1),
        other => other.clone(),
    }
}

/// Translate a formula into a constraint-list encoding with variables drawn
/// from `[lo, lo + width)`, `width <= 8 * df_size(a)`.
pub fn form_to_elem(a: &DioForm, lo: usize) -> ElemRepr {
    // Atoms relating a parameter to a compound right-hand side share one
    // skeleton: two slack variables u0, u1, a merge variable m and the pinned
    // operands, arranged so that r = u0 + u1 vanishes exactly when the two
    // sides agree, while r = |difference|-style choices keep the list
    // satisfiable unconditionally.
    match a {
        DioForm::EqCst(i, n) => ElemRepr {
            cstrs: vec![
                DioCstr::EqAdd(lo + 5, lo, lo + 1),
                DioCstr::EqAdd(lo + 4, lo, lo + 2),
                DioCstr::EqAdd(lo + 4, lo + 1, lo + 3),
                DioCstr::EqCst(lo + 3, *n),
                DioCstr::EqParam(lo + 2, *i),
            ],
            r: lo + 5,
            lo,
            width: 6,
        },
        DioForm::EqVar(i, j) => ElemRepr {
            cstrs: vec![
                DioCstr::EqAdd(lo + 5, lo, lo + 1),
                DioCstr::EqAdd(lo + 4, lo, lo + 2),
                DioCstr::EqAdd(lo + 4, lo + 1, lo + 3),
                DioCstr::EqParam(lo + 3, *j),
                DioCstr::EqParam(lo + 2, *i),
            ],
            r: lo + 5,
            lo,
            width: 6,
        },
        DioForm::EqAdd(i, j, k) | DioForm::EqMul(i, j, k) => {
            let op = if matches!(a, DioForm::EqAdd(..)) {
                DioCstr::EqAdd(lo + 5, lo + 3, lo + 4)
            } else {
                DioCstr::EqMul(lo + 5, lo + 3, lo + 4)
            };
            ElemRepr {
                cstrs: vec![
                    DioCstr::EqAdd(lo + 7, lo, lo + 1),
                    DioCstr::EqAdd(lo + 6, lo, lo + 2),
                    DioCstr::EqAdd(lo + 6, lo + 1, lo + 5),
                    op,
                    DioCstr::EqParam(lo + 4, *k),
                    DioCstr::EqParam(lo + 3, *j),
                    DioCstr::EqParam(lo + 2, *i),
                ],
                r: lo + 7,
                lo,
                width: 8,
            }
        }
        DioForm::And(b, c) | DioForm::Or(b, c) => {
            let rb = form_to_elem(b, lo);
            let rc = form_to_elem(c, lo + rb.width);
            let r = lo + rb.width + rc.width;
            // conjunction: both references vanish iff their sum does;
            // disjunction: iff their product does
            let combine = if matches!(a, DioForm::And(..)) {
                DioCstr::EqAdd(r, rb.r, rc.r)
            } else {
                DioCstr::EqMul(r, rb.r, rc.r)
            };
            let mut cstrs = vec![combine];
            cstrs.extend(rb.cstrs);
            cstrs.extend(rc.cstrs);
            ElemRepr { cstrs, r, lo, width: 1 + rb.width + rc.width }
        }
        DioForm::Exists(b) => {
            let rb = form_to_elem(b, lo);
            let witness = lo + rb.width;
            let cstrs = rb.cstrs.iter().map(|c| subst_binder(c, witness)).collect();
            ElemRepr { cstrs, r: rb.r, lo, width: 1 + rb.width }
        }
    }
}

/// Construct a satisfying assignment for the constraint list of
/// `form_to_elem(a, lo)`, written into `phi` (indexed absolutely).  With
/// `force_zero`, additionally drives the reference variable to zero; this
/// requires the formula to hold at `nu` with witnesses `<= bound`, and the
/// same bound steers the witness search at binders.  Returns false when a
/// required witness could not be found.
pub fn elem_witness(
    a: &DioForm,
    nu: &Valuation,
    lo: usize,
    force_zero: bool,
    bound: &Nat,
    phi: &mut Vec<Nat>,
) -> bool {
    let ensure = |phi: &mut Vec<Nat>, u: usize| {
        if phi.len() <= u {
            phi.resize(u + 1, Nat::zero());
        }
    };
    let set = |phi: &mut Vec<Nat>, u: usize, v: Nat| {
        ensure(phi, u);
        phi[u] = v;
    };
    match a {
        DioForm::EqCst(..) | DioForm::EqVar(..) => {
            // shared 6-wide skeleton: m = u0 + lhs = u1 + rhs
            let (lhs, rhs) = match a {
                DioForm::EqCst(i, n) => (nu.get(*i), nat(*n)),
                DioForm::EqVar(i, j) => (nu.get(*i), nu.get(*j)),
                _ => unreachable!(),
            };
            let m = lhs.clone().max(rhs.clone());
            set(phi, lo, m.clone() - lhs.clone());
            set(phi, lo + 1, m.clone() - rhs.clone());
            set(phi, lo + 2, lhs.clone());
            set(phi, lo + 3, rhs.clone());
            set(phi, lo + 4, m.clone());
            set(phi, lo + 5, (m.clone() - lhs.clone()) + (m - rhs.clone()));
            !force_zero || lhs == rhs
        }
        DioForm::EqAdd(i, j, k) | DioForm::EqMul(i, j, k) => {
            let lhs = nu.get(*i);
            let rhs = match a {
                DioForm::EqAdd(..) => nu.get(*j) + nu.get(*k),
                _ => nu.get(*j) * nu.get(*k),
            };
            let m = lhs.clone().max(rhs.clone());
            set(phi, lo, m.clone() - lhs.clone());
            set(phi, lo + 1, m.clone() - rhs.clone());
            set(phi, lo + 2, lhs.clone());
            set(phi, lo + 3, nu.get(*j));
            set(phi, lo + 4, nu.get(*k));
            set(phi, lo + 5, rhs.clone());
            set(phi, lo + 6, m.clone());
            set(phi, lo + 7, (m.clone() - lhs.clone()) + (m - rhs.clone()));
            !force_zero || lhs == rhs
        }
        DioForm::And(b, c) => {
            let rb = form_to_elem(b, lo);
            let ok1 = elem_witness(b, nu, lo, force_zero, bound, phi);
            let ok2 = elem_witness(c, nu, lo + rb.width, force_zero, bound, phi);
            let rc = form_to_elem(c, lo + rb.width);
            let sum = phi[rb.r].clone() + phi[rc.r].clone();
            set(phi, lo + rb.width + rc.width, sum);
            ok1 && ok2
        }
        DioForm::Or(b, c) => {
            let rb_repr = form_to_elem(b, lo);
            // decide which branch can be driven to zero
            let force_b = force_zero && df_eval_naive(b, nu, bound);
            let force_c = force_zero && !force_b;
            let ok1 = elem_witness(b, nu, lo, force_b, bound, phi);
            let ok2 = elem_witness(c, nu, lo + rb_repr.width, force_c, bound, phi);
            let rc_repr = form_to_elem(c, lo + rb_repr.width);
            let prod = phi[rb_repr.r].clone() * phi[rc_repr.r].clone();
            set(phi, lo + rb_repr.width + rc_repr.width, prod);
            ok1 && ok2
        }
        DioForm::Exists(b) => {
            let rb = form_to_elem(b, lo);
            let witness_var = lo + rb.width;
            let mut w = Nat::zero();
            if force_zero {
                // find a witness within the bound making the body hold
                loop {
                    if df_eval_naive(b, &nu.lift(w.clone()), bound) {
                        break;
                    }
                    if w == *bound {
                        return false;
                    }
                    w += Nat::one();
                }
            }
            set(phi, witness_var, w.clone());
            elem_witness(b, &nu.lift(w), lo, force_zero, bound, phi)
        }
    }
}
