//! From single Diophantine equations to recursive algorithms: a solution
//! tuple is packed into one number with an iterated Cantor pairing, a
//! minimization-free algorithm tests a packed candidate against the
//! equation, and one outer minimization searches for a solution.

use crate::dio::{DioPoly, DioSingle};
use crate::models::RecAlg;

// ---------------------------------------------------------------------------
// Host-level pairing.
// ---------------------------------------------------------------------------

/// Cantor pairing `<x, y> = (x+y)(x+y+1)/2 + y`.
pub fn cantor_pair(x: u64, y: u64) -> u64 {
    let s = x as u128 + y as u128;
    let t = s * (s + 1) / 2 + y as u128;
    u64::try_from(t).expect("pairing overflow")
}

/// Inverse of [`cantor_pair`].
pub fn cantor_unpair(c: u64) -> (u64, u64) {
    // largest s with s(s+1)/2 <= c
    let mut s = 0u64;
    while (s + 1) as u128 * (s + 2) as u128 / 2 <= c as u128 {
        s += 1;
    }
    let tri = s as u128 * (s as u128 + 1) / 2;
    let y = (c as u128 - tri) as u64;
    (s - y, y)
}

/// Pack a tuple into one number, right-nested:
/// `[] -> 0`, `[x] -> x`, `[x, rest..] -> <x, pack(rest)>`.
pub fn pair_inj(v: &[u64]) -> u64 {
    match v {
        [] => 0,
        [x] => *x,
        [x, rest @ ..] => cantor_pair(*x, pair_inj(rest)),
    }
}

/// Unpack a number into an `m`-tuple, inverse of [`pair_inj`] at length `m`.
pub fn pair_pr(m: usize, c: u64) -> Vec<u64> {
    match m {
        0 => Vec::new(),
        1 => vec![c],
        _ => {
            let mut out = Vec::with_capacity(m);
            let mut rest = c;
            for _ in 0..m - 1 {
                let (x, r) = cantor_unpair(rest);
                out.push(x);
                rest = r;
            }
            out.push(rest);
            out
        }
    }
}

// ---------------------------------------------------------------------------
// Gadget catalog: primitive recursive building blocks.
// ---------------------------------------------------------------------------

fn comp(arity: usize, f: RecAlg, gs: Vec<RecAlg>) -> RecAlg {
    RecAlg::Comp(arity, Box::new(f), gs)
}

fn rec(f: RecAlg, g: RecAlg) -> RecAlg {
    RecAlg::Rec(Box::new(f), Box::new(g))
}

/// Constant function of the given arity.
pub fn ra_const(arity: usize, n: u64) -> RecAlg {
    comp(arity, RecAlg::Cst(n), Vec::new())
}

/// Addition, arity 2.
pub fn ra_add() -> RecAlg {
    // add(0, y) = y; add(1+n, y) = S(add(n, y))
    rec(
        RecAlg::Proj(1, 0),
        comp(3, RecAlg::Succ, vec![RecAlg::Proj(3, 1)]),
    )
}

/// Multiplication, arity 2.
pub fn ra_mult() -> RecAlg {
    // mult(0, y) = 0; mult(1+n, y) = add(y, mult(n, y)).  The step adds y on
    // the recursing side because add unrolls on its first argument, keeping
    // the evaluator cost at x*y instead of x^2*y.
    rec(
        RecAlg::Zero,
        comp(3, ra_add(), vec![RecAlg::Proj(3, 2), RecAlg::Proj(3, 1)]),
    )
}

/// Predecessor (0 at 0), arity 1.
pub fn ra_pred() -> RecAlg {
    // pred(0) = 0; pred(1+n) = n
    rec(RecAlg::Cst(0), RecAlg::Proj(2, 0))
}

/// Truncated subtraction `x - y` (0 when y > x), arity 2.
pub fn ra_sub() -> RecAlg {
    // rsub(0, x) = x; rsub(1+n, x) = pred(rsub(n, x))
    let rsub = rec(
        RecAlg::Proj(1, 0),
        comp(3, ra_pred(), vec![RecAlg::Proj(3, 1)]),
    );
    comp(2, rsub, vec![RecAlg::Proj(2, 1), RecAlg::Proj(2, 0)])
}

/// Equality gauge `(x - y) + (y - x)`: zero exactly on equal inputs, arity 2.
pub fn ra_eq() -> RecAlg {
    let d1 = comp(2, ra_sub(), vec![RecAlg::Proj(2, 0), RecAlg::Proj(2, 1)]);
    let d2 = comp(2, ra_sub(), vec![RecAlg::Proj(2, 1), RecAlg::Proj(2, 0)]);
    comp(2, ra_add(), vec![d1, d2])
}

/// Triangular numbers `n(n+1)/2`, arity 1.
pub fn ra_tri() -> RecAlg {
    // tri(0) = 0; tri(1+n) = (1+n) + tri(n), small argument first so the
    // add unrolls n times, not tri(n) times
    let g = comp(
        2,
        ra_add(),
        vec![
            comp(2, RecAlg::Succ, vec![RecAlg::Proj(2, 0)]),
            RecAlg::Proj(2, 1),
        ],
    );
    rec(RecAlg::Cst(0), g)
}

/// Cantor pairing `<x, y>`, arity 2.
pub fn ra_pair() -> RecAlg {
    let sum = comp(2, ra_add(), vec![RecAlg::Proj(2, 0), RecAlg::Proj(2, 1)]);
    let tri_sum = comp(2, ra_tri(), vec![sum]);
    comp(2, ra_add(), vec![RecAlg::Proj(2, 1), tri_sum])
}

/// `root(c)`: the unique `s` with `tri(s) <= c < tri(s+1)`, arity 1.
pub fn ra_root() -> RecAlg {
    // Bounded search by primitive recursion: G(0, c) = 0 and
    // G(1+n, c) = G(n, c) + [tri(G(n, c) + 1) <= c], so G(c, c) = root(c)
    // because the root never exceeds c.
    let acc = RecAlg::Proj(3, 1);
    let c = RecAlg::Proj(3, 2);
    let tri_next = comp(
        3,
        ra_tri(),
        vec![comp(3, RecAlg::Succ, vec![acc.clone()])],
    );
    // [tri <= c] as 1 - (tri - c)
    let over = comp(3, ra_sub(), vec![tri_next, c]);
    let step = comp(3, ra_sub(), vec![ra_const(3, 1), over]);
    let g = comp(3, ra_add(), vec![acc, step]);
    let search = rec(RecAlg::Zero, g);
    comp(1, search, vec![RecAlg::Proj(1, 0), RecAlg::Proj(1, 0)])
}

/// Second component of the Cantor unpairing, arity 1.
pub fn ra_second() -> RecAlg {
    // y = c - tri(root(c))
    let tri_root = comp(1, ra_tri(), vec![ra_root()]);
    comp(1, ra_sub(), vec![RecAlg::Proj(1, 0), tri_root])
}

/// First component of the Cantor unpairing, arity 1.
pub fn ra_first() -> RecAlg {
    // x = root(c) - y
    comp(1, ra_sub(), vec![ra_root(), ra_second()])
}

/// Component `i` of the right-nested `m`-tuple decoding, arity 1.
pub fn ra_project(m: usize, i: usize) -> RecAlg {
    assert!(i < m, "component {} of an {}-tuple", i, m);
    let mut t = RecAlg::Proj(1, 0);
    for _ in 0..i {
        t = comp(1, ra_second(), vec![t]);
    }
    if i + 1 < m {
        t = comp(1, ra_first(), vec![t]);
    }
    t
}

// ---------------------------------------------------------------------------
// Equations as recursive algorithms.
// ---------------------------------------------------------------------------

/// Compile a polynomial over `m` equation variables and `n` parameters into
/// an algorithm of arity `m + n` evaluating it on `(w_0..w_{m-1}, x_0..x_{n-1})`.
pub fn ra_eval_poly(p: &DioPoly, m: usize, n: usize) -> RecAlg {
    let k = m + n;
    match p {
        DioPoly::UVar(u) => {
            assert!(*u < m, "equation variable {} out of range", u);
            RecAlg::Proj(k, *u)
        }
        DioPoly::Param(i) => {
            assert!(*i < n, "parameter {} out of range", i);
            RecAlg::Proj(k, m + i)
        }
        DioPoly::Cst(c) => ra_const(k, *c),
        DioPoly::Add(a, b) => comp(
            k,
            ra_add(),
            vec![ra_eval_poly(a, m, n), ra_eval_poly(b, m, n)],
        ),
        DioPoly::Mul(a, b) => comp(
            k,
            ra_mult(),
            vec![ra_eval_poly(a, m, n), ra_eval_poly(b, m, n)],
        ),
    }
}

/// Number of equation variables an equation is treated as having: one past
/// the largest used index (at least one, so a packed candidate always
/// decodes).
pub fn equation_vars(e: &DioSingle) -> usize {
    e.max_uvar().map_or(1, |m| m + 1)
}

/// Minimization-free tester of arity `1 + n`: on `(x, v)` it returns zero
/// exactly when unpacking `x` into a tuple for the equation variables
/// satisfies the equation at parameters `v`.  Total on all inputs.
pub fn ra_test(e: &DioSingle, n: usize) -> RecAlg {
    let m = equation_vars(e);
    let k = 1 + n;
    // arguments for the polynomial evaluators: decoded components of x,
    // then the parameters
    let mut args = Vec::with_capacity(m + n);
    for u in 0..m {
        args.push(comp(k, ra_project(m, u), vec![RecAlg::Proj(k, 0)]));
    }
    for i in 0..n {
        args.push(RecAlg::Proj(k, 1 + i));
    }
    let lhs = comp(k, ra_eval_poly(&e.lhs, m, n), args.clone());
    let rhs = comp(k, ra_eval_poly(&e.rhs, m, n), args);
    comp(k, ra_eq(), vec![lhs, rhs])
}

/// Solution search of arity `n`: a single outer minimization over the packed
/// candidate wraps the tester, so the algorithm halts on `v` exactly when
/// the equation has a solution at parameters `v` (and then returns the least
/// packed solution).
pub fn ra_find(e: &DioSingle, n: usize) -> RecAlg {
    RecAlg::Min(Box::new(ra_test(e, n)))
}

/// Count Min nodes (the search above must use exactly one).
pub fn min_count(f: &RecAlg) -> usize {
    match f {
        RecAlg::Cst(_) | RecAlg::Zero | RecAlg::Succ | RecAlg::Proj(..) => 0,
        RecAlg::Comp(_, f, gs) => min_count(f) + gs.iter().map(min_count).sum::<usize>(),
        RecAlg::Rec(f, g) => min_count(f) + min_count(g),
        RecAlg::Min(f) => 1 + min_count(f),
    }
}
