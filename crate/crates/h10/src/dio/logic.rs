//! Diophantine logic: positive existential formulas over natural numbers.
//!
//! A formula talks about an infinite family of variables `x_0, x_1, ...`
//! through four kinds of atoms (`x_i = n`, `x_i = x_j`, `x_i = x_j + x_k`,
//! `x_i = x_j * x_k`) combined with conjunction, disjunction and existential
//! quantification.  Binders use de Bruijn style: `Exists(A)` binds `x_0`
//! inside `A` and shifts every other variable up by one.

use crate::solver::{solve_conjunction, EAtom, ETerm};
use crate::{nat, Nat};
use serde::{Deserialize, Serialize};

/// Positive existential Diophantine formula with de Bruijn binders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DioForm {
    /// `x_i = n`
    #[serde(rename = "CST")]
    EqCst(usize, u64),
    /// `x_i = x_j`
    #[serde(rename = "VAR")]
    EqVar(usize, usize),
    /// `x_i = x_j + x_k`
    #[serde(rename = "ADD")]
    EqAdd(usize, usize, usize),
    /// `x_i = x_j * x_k`
    #[serde(rename = "MUL")]
    EqMul(usize, usize, usize),
    #[serde(rename = "AND")]
    And(Box<DioForm>, Box<DioForm>),
    #[serde(rename = "OR")]
    Or(Box<DioForm>, Box<DioForm>),
    /// Binds `x_0` in the body.
    #[serde(rename = "EXISTS")]
    Exists(Box<DioForm>),
}

// Unrolled destructor: formulas out of the reduction pipeline can nest
// binders deeply enough to overflow the stack under the default recursive
// drop.
impl Drop for DioForm {
    fn drop(&mut self) {
        let mut stack: Vec<DioForm> = Vec::new();
        let detach = |t: &mut DioForm, stack: &mut Vec<DioForm>| match t {
            DioForm::And(a, b) | DioForm::Or(a, b) => {
                stack.push(std::mem::replace(&mut **a, DioForm::EqCst(0, 0)));
                stack.push(std::mem::replace(&mut **b, DioForm::EqCst(0, 0)));
            }
            DioForm::Exists(a) => {
                stack.push(std::mem::replace(&mut **a, DioForm::EqCst(0, 0)));
            }
            _ => {}
        };
        detach(self, &mut stack);
        while let Some(mut t) = stack.pop() {
            detach(&mut t, &mut stack);
        }
    }
}

/// Number of nodes in the syntax tree.
pub fn df_size(a: &DioForm) -> usize {
    // Iterative traversal: formulas produced by the reduction pipeline can
    // nest binders thousands deep.
    let mut stack = vec![a];
    let mut n = 0usize;
    while let Some(t) = stack.pop() {
        n += 1;
        match t {
            DioForm::EqCst(..) | DioForm::EqVar(..) | DioForm::EqAdd(..) | DioForm::EqMul(..) => {}
            DioForm::And(b, c) | DioForm::Or(b, c) => {
                stack.push(b);
                stack.push(c);
            }
            DioForm::Exists(b) => stack.push(b),
        }
    }
    n
}

/// Assignment of values to the variables `x_0, x_1, ...`: an explicit finite
/// prefix followed by a constant tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    prefix: Vec<Nat>,
    tail: Nat,
}

impl Valuation {
    pub fn new(prefix: Vec<Nat>, tail: Nat) -> Self {
        Valuation { prefix, tail }
    }

    /// All variables zero.
    pub fn zero() -> Self {
        Valuation { prefix: Vec::new(), tail: nat(0) }
    }

    /// Finite prefix with a zero tail.
    pub fn of_prefix(prefix: Vec<Nat>) -> Self {
        Valuation { prefix, tail: nat(0) }
    }

    pub fn get(&self, i: usize) -> Nat {
        self.prefix.get(i).unwrap_or(&self.tail).clone()
    }

    /// `lift(x)` maps `x_0` to `x` and `x_{1+i}` to the old `x_i`.
    pub fn lift(&self, x: Nat) -> Valuation {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(x);
        prefix.extend(self.prefix.iter().cloned());
        Valuation { prefix, tail: self.tail.clone() }
    }
}

/// Variable renaming: an explicit prefix followed by a shifted identity,
/// `i -> prefix[i]` when `i < prefix.len()` and `i -> i - prefix.len() + offset`
/// otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    pub prefix: Vec<usize>,
    pub offset: usize,
}

impl Renaming {
    pub fn new(prefix: Vec<usize>, offset: usize) -> Self {
        Renaming { prefix, offset }
    }

    /// Plain shift by `k`: `i -> i + k`.
    pub fn shift(k: usize) -> Self {
        Renaming { prefix: Vec::new(), offset: k }
    }

    pub fn apply(&self, i: usize) -> usize {
        match self.prefix.get(i) {
            Some(&j) => j,
            None => i - self.prefix.len() + self.offset,
        }
    }

    /// Push the renaming under a binder: `0 -> 0` and `1+i -> 1 + self(i)`.
    pub fn lift(&self) -> Renaming {
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(0);
        prefix.extend(self.prefix.iter().map(|&j| j + 1));
        Renaming { prefix, offset: self.offset + 1 }
    }
}

/// Apply a renaming to every free variable of a relation.
pub fn rel_rename(rho: &Renaming, a: &DioForm) -> DioForm {
    match a {
        DioForm::EqCst(i, n) => DioForm::EqCst(rho.apply(*i), *n),
        DioForm::EqVar(i, j) => DioForm::EqVar(rho.apply(*i), rho.apply(*j)),
        DioForm::EqAdd(i, j, k) => DioForm::EqAdd(rho.apply(*i), rho.apply(*j), rho.apply(*k)),
        DioForm::EqMul(i, j, k) => DioForm::EqMul(rho.apply(*i), rho.apply(*j), rho.apply(*k)),
        DioForm::And(b, c) => rel_conj(rel_rename(rho, b), rel_rename(rho, c)),
        DioForm::Or(b, c) => rel_disj(rel_rename(rho, b), rel_rename(rho, c)),
        DioForm::Exists(b) => rel_exists(rel_rename(&rho.lift(), b)),
    }
}

pub fn rel_conj(a: DioForm, b: DioForm) -> DioForm {
    DioForm::And(Box::new(a), Box::new(b))
}

pub fn rel_disj(a: DioForm, b: DioForm) -> DioForm {
    DioForm::Or(Box::new(a), Box::new(b))
}

pub fn rel_exists(a: DioForm) -> DioForm {
    DioForm::Exists(Box::new(a))
}

// ---------------------------------------------------------------------------
// Function shapes.
//
// A "function shape" is a formula F whose meaning is an equation
// `x_0 = f(x_1, x_2, ...)`: the formula holds at a valuation exactly when
// variable 0 carries the value of the described function applied to the
// shifted valuation.  Composing shapes only requires renamings and fresh
// existentials.
// ---------------------------------------------------------------------------

/// Shape of the function returning input `i`.
pub fn fun_var(i: usize) -> DioForm {
    DioForm::EqVar(0, 1 + i)
}

/// Shape of the constant function `n`.
pub fn fun_cst(n: u64) -> DioForm {
    DioForm::EqCst(0, n)
}

/// Rename the *inputs* of a function shape (output variable 0 is kept).
pub fn fun_rename(rho: &Renaming, f: &DioForm) -> DioForm {
    rel_rename(&rho.lift(), f)
}

/// Shape of `f + g`: introduces two fresh witnesses for the operand values.
pub fn fun_plus(f: &DioForm, g: &DioForm) -> DioForm {
    // Under the two binders, x_0 = value of g, x_1 = value of f, and the
    // ambient variables are shifted by 2 (so the old output x_0 is x_2).
    let f1 = rel_rename(&Renaming::new(vec![1], 3), f);
    let g1 = rel_rename(&Renaming::new(vec![0], 3), g);
    rel_exists(rel_exists(rel_conj(DioForm::EqAdd(2, 1, 0), rel_conj(f1, g1))))
}

/// Shape of `f * g`.
pub fn fun_mult(f: &DioForm, g: &DioForm) -> DioForm {
    let f1 = rel_rename(&Renaming::new(vec![1], 3), f);
    let g1 = rel_rename(&Renaming::new(vec![0], 3), g);
    rel_exists(rel_exists(rel_conj(DioForm::EqMul(2, 1, 0), rel_conj(f1, g1))))
}

/// Relation `f = g` between two function shapes: one shared witness carries
/// both values.
pub fn rel_fun_eq(f: &DioForm, g: &DioForm) -> DioForm {
    rel_exists(rel_conj(f.clone(), g.clone()))
}

/// Always-true relation.
pub fn rel_true() -> DioForm {
    rel_exists(DioForm::EqCst(0, 0))
}

/// Always-false relation.
pub fn rel_false() -> DioForm {
    rel_exists(rel_conj(DioForm::EqCst(0, 0), DioForm::EqCst(0, 1)))
}

/// Shift a function shape's inputs by one, for use under one extra binder.
fn fun_under(f: &DioForm) -> DioForm {
    fun_rename(&Renaming::shift(1), f)
}

/// Relation `f <= g`.
pub fn rel_le(f: &DioForm, g: &DioForm) -> DioForm {
    // exists d, f + d = g
    let sum = fun_plus(&fun_under(f), &fun_var(0));
    rel_exists(rel_fun_eq(&sum, &fun_under(g)))
}

/// Relation `f < g`.
pub fn rel_lt(f: &DioForm, g: &DioForm) -> DioForm {
    // exists d, 1 + d + f = g
    let sum = fun_plus(&fun_cst(1), &fun_plus(&fun_var(0), &fun_under(f)));
    rel_exists(rel_fun_eq(&sum, &fun_under(g)))
}

/// Relation `f <> g`.
pub fn rel_ne(f: &DioForm, g: &DioForm) -> DioForm {
    rel_disj(rel_lt(f, g), rel_lt(g, f))
}

/// Relation `f | g` (f divides g).
pub fn rel_divides(f: &DioForm, g: &DioForm) -> DioForm {
    // exists k, g = k * f
    let prod = fun_mult(&fun_var(0), &fun_under(f));
    rel_exists(rel_fun_eq(&fun_under(g), &prod))
}

/// Relation `f does not divide g`, expressed positively:
/// either `f = 0` and `g <> 0`, or `g = a*f + b` with `0 < b < f`.
pub fn rel_ndivides(f: &DioForm, g: &DioForm) -> DioForm {
    let zero_case = rel_conj(rel_fun_eq(f, &fun_cst(0)), rel_ne(g, &fun_cst(0)));
    // Under two binders: x_1 = quotient a, x_0 = remainder b.
    let f2 = fun_rename(&Renaming::shift(2), f);
    let g2 = fun_rename(&Renaming::shift(2), g);
    let qf_plus_b = fun_plus(&fun_mult(&fun_var(1), &f2), &fun_var(0));
    let body = rel_conj(
        rel_fun_eq(&g2, &qf_plus_b),
        rel_conj(rel_lt(&fun_cst(0), &fun_var(0)), rel_lt(&fun_var(0), &f2)),
    );
    rel_disj(zero_case, rel_exists(rel_exists(body)))
}

// ---------------------------------------------------------------------------
// Bounded evaluation.
// ---------------------------------------------------------------------------

/// Result of evaluating a formula with all existential witnesses restricted
/// to values `<= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DfOutcome {
    True,
    FalseUpTo(Nat),
}

impl DfOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, DfOutcome::True)
    }
}

// During flattening a de Bruijn index resolves either to the search variable
// introduced by its binder or, past the binders, to a value fixed by the
// ambient valuation.
fn resolve(env: &[usize], nu: &Valuation, i: usize) -> ETerm {
    if i < env.len() {
        ETerm::Var(env[env.len() - 1 - i])
    } else {
        ETerm::Val(nu.get(i - env.len()))
    }
}

/// Flatten a formula into a disjunction of atom conjunctions.  Existential
/// variables are allocated from a shared counter, so variable indices are
/// globally unique across disjuncts.
fn flatten(
    a: &DioForm,
    env: &mut Vec<usize>,
    nu: &Valuation,
    next: &mut usize,
    out: &mut Vec<Vec<EAtom>>,
) {
    match a {
        DioForm::EqCst(i, n) => {
            out.push(vec![EAtom::Eq(resolve(env, nu, *i), ETerm::Val(nat(*n)))]);
        }
        DioForm::EqVar(i, j) => {
            out.push(vec![EAtom::Eq(resolve(env, nu, *i), resolve(env, nu, *j))]);
        }
        DioForm::EqAdd(i, j, k) => {
            out.push(vec![EAtom::Add(
                resolve(env, nu, *i),
                resolve(env, nu, *j),
                resolve(env, nu, *k),
            )]);
        }
        DioForm::EqMul(i, j, k) => {
            out.push(vec![EAtom::Mul(
                resolve(env, nu, *i),
                resolve(env, nu, *j),
                resolve(env, nu, *k),
            )]);
        }
        DioForm::Or(b, c) => {
            flatten(b, env, nu, next, out);
            flatten(c, env, nu, next, out);
        }
        DioForm::And(b, c) => {
            let mut left = Vec::new();
            flatten(b, env, nu, next, &mut left);
            let mut right = Vec::new();
            flatten(c, env, nu, next, &mut right);
            for l in &left {
                for r in &right {
                    let mut both = l.clone();
                    both.extend(r.iter().cloned());
                    out.push(both);
                }
            }
        }
        DioForm::Exists(b) => {
            let u = *next;
            *next += 1;
            env.push(u);
            flatten(b, env, nu, next, out);
            env.pop();
        }
    }
}

/// Decide whether `a` holds at `nu` when every existential witness is
/// restricted to the range `0..=bound`.
pub fn df_eval_bounded(a: &DioForm, nu: &Valuation, bound: &Nat) -> DfOutcome {
    let mut env = Vec::new();
    let mut next = 0usize;
    let mut disjuncts = Vec::new();
    flatten(a, &mut env, nu, &mut next, &mut disjuncts);
    for atoms in &disjuncts {
        if solve_conjunction(atoms, next, &|_| Some(bound.clone())).is_some() {
            return DfOutcome::True;
        }
    }
    DfOutcome::FalseUpTo(bound.clone())
}

/// Reference evaluator: direct recursion over the formula, enumerating each
/// witness from 0 to the bound.  Exponential, for cross-checking only.
pub(crate) fn df_eval_naive(a: &DioForm, nu: &Valuation, bound: &Nat) -> bool {
    use num_traits::One;
    match a {
        DioForm::EqCst(i, n) => nu.get(*i) == nat(*n),
        DioForm::EqVar(i, j) => nu.get(*i) == nu.get(*j),
        DioForm::EqAdd(i, j, k) => nu.get(*i) == nu.get(*j) + nu.get(*k),
        DioForm::EqMul(i, j, k) => nu.get(*i) == nu.get(*j) * nu.get(*k),
        DioForm::And(b, c) => df_eval_naive(b, nu, bound) && df_eval_naive(c, nu, bound),
        DioForm::Or(b, c) => df_eval_naive(b, nu, bound) || df_eval_naive(c, nu, bound),
        DioForm::Exists(b) => {
            let mut w = nat(0);
            loop {
                if df_eval_naive(b, &nu.lift(w.clone()), bound) {
                    return true;
                }
                if w == *bound {
                    return false;
                }
                w += Nat::one();
            }
        }
    }
}
