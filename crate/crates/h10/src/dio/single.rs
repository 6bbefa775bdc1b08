//! Single Diophantine equations: every finite constraint list collapses into
//! one polynomial identity via the convexity trick
//! `sum 2*p_i*q_i = sum p_i^2 + q_i^2  <=>  all p_i = q_i`,
//! plus the signed variant used for the integer form of the problem.

use crate::dio::elem::DioCstr;
use crate::dio::logic::Valuation;
use crate::{nat, Int, Nat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Polynomial over solution variables `u_i` and parameters `x_i` with
/// natural-number constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DioPoly {
    #[serde(rename = "UVAR")]
    UVar(usize),
    #[serde(rename = "PARAM")]
    Param(usize),
    #[serde(rename = "CST")]
    Cst(u64),
    #[serde(rename = "ADD")]
    Add(Box<DioPoly>, Box<DioPoly>),
    #[serde(rename = "MUL")]
    Mul(Box<DioPoly>, Box<DioPoly>),
}

/// A single equation between two polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DioSingle {
    pub lhs: DioPoly,
    pub rhs: DioPoly,
}

/// Signed polynomial over variables only (parameters already eliminated).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZPoly {
    #[serde(rename = "VAR")]
    Var(usize),
    #[serde(rename = "CST")]
    Cst(i64),
    #[serde(rename = "ADD")]
    Add(Box<ZPoly>, Box<ZPoly>),
    #[serde(rename = "MUL")]
    Mul(Box<ZPoly>, Box<ZPoly>),
}

/// Evaluate a polynomial without recursion (equation trees coming out of the
/// big reduction pipeline nest deeply).
pub fn poly_eval(p: &DioPoly, nu: &Valuation, phi: &[Nat]) -> Nat {
    enum Step<'a> {
        Visit(&'a DioPoly),
        Combine(&'a DioPoly),
    }
    let mut stack = vec![Step::Visit(p)];
    let mut vals: Vec<Nat> = Vec::new();
    while let Some(step) = stack.pop() {
        match step {
            Step::Visit(t) => match t {
                DioPoly::UVar(u) => vals.push(phi.get(*u).cloned().unwrap_or_else(Nat::zero)),
                DioPoly::Param(i) => vals.push(nu.get(*i)),
                DioPoly::Cst(n) => vals.push(nat(*n)),
                DioPoly::Add(a, b) | DioPoly::Mul(a, b) => {
                    stack.push(Step::Combine(t));
                    stack.push(Step::Visit(b));
                    stack.push(Step::Visit(a));
                }
            },
            Step::Combine(t) => {
                let b = vals.pop().expect("operand");
                let a = vals.pop().expect("operand");
                vals.push(match t {
                    DioPoly::Add(..) => a + b,
                    DioPoly::Mul(..) => a * b,
                    _ => unreachable!(),
                });
            }
        }
    }
    vals.pop().expect("value")
}

/// Evaluate an equation.
pub fn single_eval(e: &DioSingle, nu: &Valuation, phi: &[Nat]) -> bool {
    poly_eval(&e.lhs, nu, phi) == poly_eval(&e.rhs, nu, phi)
}

/// Evaluate a signed polynomial without recursion.
pub fn h10z_eval(p: &ZPoly, phi: &[Int]) -> Int {
    enum Step<'a> {
        Visit(&'a ZPoly),
        Combine(&'a ZPoly),
    }
    let mut stack = vec![Step::Visit(p)];
    let mut vals: Vec<Int> = Vec::new();
    while let Some(step) = stack.pop() {
        match step {
            Step::Visit(t) => match t {
                ZPoly::Var(u) => vals.push(phi.get(*u).cloned().unwrap_or_else(Int::zero)),
                ZPoly::Cst(n) => vals.push(Int::from(*n)),
                ZPoly::Add(a, b) | ZPoly::Mul(a, b) => {
                    stack.push(Step::Combine(t));
                    stack.push(Step::Visit(b));
                    stack.push(Step::Visit(a));
                }
            },
            Step::Combine(t) => {
                let b = vals.pop().expect("operand");
                let a = vals.pop().expect("operand");
                vals.push(match t {
                    ZPoly::Add(..) => a + b,
                    ZPoly::Mul(..) => a * b,
                    _ => unreachable!(),
                });
            }
        }
    }
    vals.pop().expect("value")
}

// Unrolled destructors: equation trees from long constraint lists or chained
// reductions can be deep enough to overflow the stack under the default
// recursive drop.
impl Drop for DioPoly {
    fn drop(&mut self) {
        let mut stack: Vec<DioPoly> = Vec::new();
        let detach = |t: &mut DioPoly, stack: &mut Vec<DioPoly>| {
            if let DioPoly::Add(a, b) | DioPoly::Mul(a, b) = t {
                stack.push(std::mem::replace(&mut **a, DioPoly::Cst(0)));
                stack.push(std::mem::replace(&mut **b, DioPoly::Cst(0)));
            }
        };
        detach(self, &mut stack);
        while let Some(mut t) = stack.pop() {
            detach(&mut t, &mut stack);
        }
    }
}

impl Drop for ZPoly {
    fn drop(&mut self) {
        let mut stack: Vec<ZPoly> = Vec::new();
        let detach = |t: &mut ZPoly, stack: &mut Vec<ZPoly>| {
            if let ZPoly::Add(a, b) | ZPoly::Mul(a, b) = t {
                stack.push(std::mem::replace(&mut **a, ZPoly::Cst(0)));
                stack.push(std::mem::replace(&mut **b, ZPoly::Cst(0)));
            }
        };
        detach(self, &mut stack);
        while let Some(mut t) = stack.pop() {
            detach(&mut t, &mut stack);
        }
    }
}

fn padd(a: DioPoly, b: DioPoly) -> DioPoly {
    DioPoly::Add(Box::new(a), Box::new(b))
}

fn pmul(a: DioPoly, b: DioPoly) -> DioPoly {
    DioPoly::Mul(Box::new(a), Box::new(b))
}

/// Combine summands into a tree of logarithmic depth, keeping deep pipelines
/// within stack limits even for recursive evaluators.
fn balanced_sum(mut terms: Vec<DioPoly>) -> DioPoly {
    if terms.is_empty() {
        return DioPoly::Cst(0);
    }
    while terms.len() > 1 {
        let mut next = Vec::with_capacity(terms.len() / 2 + 1);
        let mut it = terms.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(padd(a, b)),
                None => next.push(a),
            }
        }
        terms = next;
    }
    terms.pop().unwrap()
}

/// Sides of one constraint as polynomials.
fn cstr_sides(c: &DioCstr) -> (DioPoly, DioPoly) {
    match c {
        DioCstr::EqCst(u, n) => (DioPoly::UVar(*u), DioPoly::Cst(*n)),
        DioCstr::EqU(u, v) => (DioPoly::UVar(*u), DioPoly::UVar(*v)),
        DioCstr::EqParam(u, i) => (DioPoly::UVar(*u), DioPoly::Param(*i)),
        DioCstr::EqAdd(u, v, w) => (
            DioPoly::UVar(*u),
            padd(DioPoly::UVar(*v), DioPoly::UVar(*w)),
        ),
        DioCstr::EqMul(u, v, w) => (
            DioPoly::UVar(*u),
            pmul(DioPoly::UVar(*v), DioPoly::UVar(*w)),
        ),
    }
}

/// Collapse a constraint list into one equation holding for exactly the same
/// assignments: `sum 2*p_i*q_i = sum p_i^2 + q_i^2`.  The empty list becomes
/// the trivial identity `0 = 0`.
pub fn elem_to_single(l: &[DioCstr]) -> DioSingle {
    let mut lhs = Vec::with_capacity(l.len());
    let mut rhs = Vec::with_capacity(l.len());
    for c in l {
        let (p, q) = cstr_sides(c);
        lhs.push(pmul(DioPoly::Cst(2), pmul(p.clone(), q.clone())));
        rhs.push(padd(pmul(p.clone(), p), pmul(q.clone(), q)));
    }
    DioSingle { lhs: balanced_sum(lhs), rhs: balanced_sum(rhs) }
}

fn poly_size(p: &DioPoly) -> usize {
    let mut stack = vec![p];
    let mut n = 0usize;
    while let Some(t) = stack.pop() {
        n += 1;
        if let DioPoly::Add(a, b) | DioPoly::Mul(a, b) = t {
            stack.push(a);
            stack.push(b);
        }
    }
    n
}

impl DioSingle {
    pub fn size(&self) -> usize {
        poly_size(&self.lhs) + poly_size(&self.rhs)
    }

    /// Largest solution-variable index occurring in the equation.
    pub fn max_uvar(&self) -> Option<usize> {
        self.used_uvars().into_iter().max()
    }

    /// Sorted list of solution variables occurring in the equation.
    pub fn used_uvars(&self) -> Vec<usize> {
        let mut used = std::collections::BTreeSet::new();
        let mut stack = vec![&self.lhs, &self.rhs];
        while let Some(t) = stack.pop() {
            match t {
                DioPoly::UVar(u) => {
                    used.insert(*u);
                }
                DioPoly::Add(a, b) | DioPoly::Mul(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                _ => {}
            }
        }
        used.into_iter().collect()
    }
}

/// Rename the solution variables of an equation injectively onto `0..n`
/// where `n` is the number of distinct variables used.  Satisfiability at
/// any parameter valuation is unchanged.
pub fn finitize_vars(e: &DioSingle) -> (usize, DioSingle) {
    let used = e.used_uvars();
    let map: std::collections::BTreeMap<usize, usize> =
        used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    fn go(p: &DioPoly, map: &std::collections::BTreeMap<usize, usize>) -> DioPoly {
        match p {
            DioPoly::UVar(u) => DioPoly::UVar(map[u]),
            DioPoly::Param(i) => DioPoly::Param(*i),
            DioPoly::Cst(n) => DioPoly::Cst(*n),
            DioPoly::Add(a, b) => padd(go(a, map), go(b, map)),
            DioPoly::Mul(a, b) => pmul(go(a, map), go(b, map)),
        }
    }
    (used.len(), DioSingle { lhs: go(&e.lhs, &map), rhs: go(&e.rhs, &map) })
}

fn zadd(a: ZPoly, b: ZPoly) -> ZPoly {
    ZPoly::Add(Box::new(a), Box::new(b))
}

fn zmul(a: ZPoly, b: ZPoly) -> ZPoly {
    ZPoly::Mul(Box::new(a), Box::new(b))
}

/// Translate an equation over naturals in variables `0..n` (parameters read
/// as zero) into one signed polynomial over `4n` integer variables whose
/// roots correspond to the natural solutions: each natural variable becomes
/// a sum of four squares, and the equation `p = q` becomes the root test
/// `p' + (-1) * q' = 0`.
pub fn h10_to_h10z(n: usize, e: &DioSingle) -> (usize, ZPoly) {
    fn square_block(i: usize) -> ZPoly {
        let sq = |v: usize| zmul(ZPoly::Var(v), ZPoly::Var(v));
        zadd(zadd(sq(4 * i), sq(4 * i + 1)), zadd(sq(4 * i + 2), sq(4 * i + 3)))
    }
    fn go(p: &DioPoly) -> ZPoly {
        match p {
            DioPoly::UVar(u) => square_block(*u),
            DioPoly::Param(_) => ZPoly::Cst(0),
            DioPoly::Cst(c) => ZPoly::Cst(i64::try_from(*c).expect("constant fits in i64")),
            DioPoly::Add(a, b) => zadd(go(a), go(b)),
            DioPoly::Mul(a, b) => zmul(go(a), go(b)),
        }
    }
    (4 * n, zadd(go(&e.lhs), zmul(ZPoly::Cst(-1), go(&e.rhs))))
}
