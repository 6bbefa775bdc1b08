//! Bounded brute-force satisfiability for the Diophantine representations.
//!
//! The core engine solves a conjunction of flat atoms (`t1 = t2`,
//! `t1 = t2 + t3`, `t1 = t2 * t3`) over natural-number variables.  It
//! interleaves unit propagation (an atom with enough known operands pins or
//! refutes the remaining one) with depth-first search over the lowest
//! unassigned variable in ascending value order, which makes the returned
//! assignment the lexicographically smallest solution.

use crate::dio::{DioCstr, DioPoly, DioSingle, Valuation, ZPoly};
use crate::{nat, Int, Nat};
use num_integer::Integer;
use num_traits::{One, Zero};

/// Operand of an engine atom: a fixed value or a search variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ETerm {
    Val(Nat),
    Var(usize),
}

/// Flat constraint over engine variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EAtom {
    /// `t1 = t2`
    Eq(ETerm, ETerm),
    /// `t1 = t2 + t3`
    Add(ETerm, ETerm, ETerm),
    /// `t1 = t2 * t3`
    Mul(ETerm, ETerm, ETerm),
}

impl EAtom {
    fn terms(&self) -> [&ETerm; 3] {
        match self {
            EAtom::Eq(a, b) => [a, b, b],
            EAtom::Add(a, b, c) | EAtom::Mul(a, b, c) => [a, b, c],
        }
    }
}

fn resolve(vals: &[Option<Nat>], t: &ETerm) -> Option<Nat> {
    match t {
        ETerm::Val(v) => Some(v.clone()),
        ETerm::Var(u) => vals[*u].clone(),
    }
}

/// Assign `var := val`, respecting an existing assignment and the bound.
/// Returns false on contradiction.
fn assign(
    vals: &mut [Option<Nat>],
    bounds: &dyn Fn(usize) -> Option<Nat>,
    var: usize,
    val: Nat,
) -> bool {
    if let Some(b) = bounds(var) {
        if val > b {
            return false;
        }
    }
    match &vals[var] {
        Some(old) => *old == val,
        None => {
            vals[var] = Some(val);
            true
        }
    }
}

/// One propagation pass.  `Ok(changed)` or `Err(())` on contradiction.
fn propagate_once(
    atoms: &[EAtom],
    vals: &mut [Option<Nat>],
    bounds: &dyn Fn(usize) -> Option<Nat>,
) -> Result<bool, ()> {
    let mut changed = false;
    let pin = |vals: &mut [Option<Nat>], t: &ETerm, v: Nat, changed: &mut bool| -> bool {
        match t {
            ETerm::Val(w) => *w == v,
            ETerm::Var(u) => {
                if vals[*u].is_none() {
                    *changed = true;
                }
                assign(vals, bounds, *u, v)
            }
        }
    };
    for atom in atoms {
        match atom {
            EAtom::Eq(t1, t2) => match (resolve(vals, t1), resolve(vals, t2)) {
                (Some(a), Some(b)) => {
                    if a != b {
                        return Err(());
                    }
                }
                (Some(a), None) => {
                    if !pin(vals, t2, a, &mut changed) {
                        return Err(());
                    }
                }
                (None, Some(b)) => {
                    if !pin(vals, t1, b, &mut changed) {
                        return Err(());
                    }
                }
                (None, None) => {}
            },
            EAtom::Add(t1, t2, t3) => {
                let (a, b, c) = (resolve(vals, t1), resolve(vals, t2), resolve(vals, t3));
                match (a, b, c) {
                    (_, Some(b), Some(c)) => {
                        if !pin(vals, t1, b + c, &mut changed) {
                            return Err(());
                        }
                    }
                    (Some(a), Some(b), None) => {
                        if b > a {
                            return Err(());
                        }
                        if !pin(vals, t3, a - b, &mut changed) {
                            return Err(());
                        }
                    }
                    (Some(a), None, Some(c)) => {
                        if c > a {
                            return Err(());
                        }
                        if !pin(vals, t2, a - c, &mut changed) {
                            return Err(());
                        }
                    }
                    _ => {}
                }
            }
            EAtom::Mul(t1, t2, t3) => {
                let (a, b, c) = (resolve(vals, t1), resolve(vals, t2), resolve(vals, t3));
                match (a, b, c) {
                    (_, Some(b), Some(c)) => {
                        if !pin(vals, t1, b * c, &mut changed) {
                            return Err(());
                        }
                    }
                    (Some(a), Some(b), None) => {
                        if b.is_zero() {
                            if !a.is_zero() {
                                return Err(());
                            }
                            // any factor works; leave t3 open
                        } else {
                            let (q, r) = a.div_rem(&b);
                            if !r.is_zero() {
                                return Err(());
                            }
                            if !pin(vals, t3, q, &mut changed) {
                                return Err(());
                            }
                        }
                    }
                    (Some(a), None, Some(c)) => {
                        if c.is_zero() {
                            if !a.is_zero() {
                                return Err(());
                            }
                        } else {
                            let (q, r) = a.div_rem(&c);
                            if !r.is_zero() {
                                return Err(());
                            }
                            if !pin(vals, t2, q, &mut changed) {
                                return Err(());
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(changed)
}

/// Status of one atom under a partial assignment.
fn atom_status(vals: &[Option<Nat>], atom: &EAtom) -> Option<bool> {
    match atom {
        EAtom::Eq(t1, t2) => match (resolve(vals, t1), resolve(vals, t2)) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        },
        EAtom::Add(t1, t2, t3) => {
            match (resolve(vals, t1), resolve(vals, t2), resolve(vals, t3)) {
                (Some(a), Some(b), Some(c)) => Some(a == b + c),
                _ => None,
            }
        }
        EAtom::Mul(t1, t2, t3) => {
            match (resolve(vals, t1), resolve(vals, t2), resolve(vals, t3)) {
                (Some(a), Some(b), Some(c)) => Some(a == b * c),
                // 0 * anything = 0 is settled even with an open factor
                (Some(a), Some(b), None) if b.is_zero() => Some(a.is_zero()),
                (Some(a), None, Some(c)) if c.is_zero() => Some(a.is_zero()),
                _ => None,
            }
        }
    }
}

fn dfs(
    atoms: &[EAtom],
    mut vals: Vec<Option<Nat>>,
    bounds: &dyn Fn(usize) -> Option<Nat>,
) -> Option<Vec<Nat>> {
    loop {
        match propagate_once(atoms, &mut vals, bounds) {
            Err(()) => return None,
            Ok(true) => {}
            Ok(false) => break,
        }
    }
    // Which unassigned variables still matter?
    let mut open: Option<usize> = None;
    for atom in atoms {
        match atom_status(&vals, atom) {
            Some(true) => {}
            Some(false) => return None,
            None => {
                for t in atom.terms() {
                    if let ETerm::Var(u) = t {
                        if vals[*u].is_none() {
                            open = Some(open.map_or(*u, |m: usize| m.min(*u)));
                        }
                    }
                }
            }
        }
    }
    let var = match open {
        None => {
            // Every atom settled: irrelevant variables default to zero.
            return Some(
                vals.into_iter()
                    .map(|v| v.unwrap_or_else(|| nat(0)))
                    .collect(),
            );
        }
        Some(v) => v,
    };
    let limit = bounds(var)?; // an open unbounded variable cannot be enumerated
    let mut cand = nat(0);
    loop {
        let mut next = vals.clone();
        next[var] = Some(cand.clone());
        if let Some(sol) = dfs(atoms, next, bounds) {
            return Some(sol);
        }
        if cand == limit {
            return None;
        }
        cand += Nat::one();
    }
}

/// Solve a conjunction of atoms over `nvars` variables.  Returns the
/// lexicographically smallest satisfying assignment (variables that do not
/// influence any atom come back as zero), or `None` when no assignment
/// within the per-variable bounds exists.  A bound of `None` means the
/// variable may only take values forced by propagation.
pub fn solve_conjunction(
    atoms: &[EAtom],
    nvars: usize,
    bounds: &dyn Fn(usize) -> Option<Nat>,
) -> Option<Vec<Nat>> {
    dfs(atoms, vec![None; nvars], bounds)
}

/// Outcome of a bounded satisfiability search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    /// Lexicographically smallest satisfying assignment found.
    Sat(Vec<Nat>),
    /// No solution with all variables below or at the bound.
    NoneUpTo(Nat),
}

impl SatOutcome {
    pub fn assignment(&self) -> Option<&[Nat]> {
        match self {
            SatOutcome::Sat(v) => Some(v),
            SatOutcome::NoneUpTo(_) => None,
        }
    }
}

fn cstr_atoms(l: &[DioCstr], nu: &Valuation) -> (Vec<EAtom>, usize) {
    let mut nvars = 0usize;
    let mut bump = |u: usize| {
        if u + 1 > nvars {
            nvars = u + 1;
        }
    };
    let mut atoms = Vec::with_capacity(l.len());
    for c in l {
        match c {
            DioCstr::EqCst(u, n) => {
                bump(*u);
                atoms.push(EAtom::Eq(ETerm::Var(*u), ETerm::Val(nat(*n))));
            }
            DioCstr::EqU(u, v) => {
                bump(*u);
                bump(*v);
                atoms.push(EAtom::Eq(ETerm::Var(*u), ETerm::Var(*v)));
            }
            DioCstr::EqParam(u, i) => {
                bump(*u);
                atoms.push(EAtom::Eq(ETerm::Var(*u), ETerm::Val(nu.get(*i))));
            }
            DioCstr::EqAdd(u, v, w) => {
                bump(*u);
                bump(*v);
                bump(*w);
                atoms.push(EAtom::Add(ETerm::Var(*u), ETerm::Var(*v), ETerm::Var(*w)));
            }
            DioCstr::EqMul(u, v, w) => {
                bump(*u);
                bump(*v);
                bump(*w);
                atoms.push(EAtom::Mul(ETerm::Var(*u), ETerm::Var(*v), ETerm::Var(*w)));
            }
        }
    }
    (atoms, nvars)
}

/// Search for a simultaneous solution of elementary constraints with every
/// variable bounded by `bound`.
pub fn sat_cstrs(l: &[DioCstr], nu: &Valuation, bound: &Nat) -> SatOutcome {
    let (atoms, nvars) = cstr_atoms(l, nu);
    match solve_conjunction(&atoms, nvars, &|_| Some(bound.clone())) {
        Some(sol) => SatOutcome::Sat(sol),
        None => SatOutcome::NoneUpTo(bound.clone()),
    }
}

/// Like [`sat_cstrs`] with an individual bound per variable.  Variables at
/// indices past the end of `bounds` reuse its last entry.
pub fn sat_cstrs_with_bounds(l: &[DioCstr], nu: &Valuation, bounds: &[Nat]) -> SatOutcome {
    assert!(!bounds.is_empty(), "need at least one bound");
    let (atoms, nvars) = cstr_atoms(l, nu);
    let get = |u: usize| Some(bounds.get(u).unwrap_or(&bounds[bounds.len() - 1]).clone());
    match solve_conjunction(&atoms, nvars, &get) {
        Some(sol) => SatOutcome::Sat(sol),
        None => SatOutcome::NoneUpTo(bounds.iter().max().unwrap().clone()),
    }
}

/// Flatten one polynomial into atoms; returns the term carrying its value.
fn poly_atoms(
    p: &DioPoly,
    nu: &Valuation,
    next: &mut usize,
    atoms: &mut Vec<EAtom>,
) -> ETerm {
    match p {
        DioPoly::UVar(u) => ETerm::Var(*u),
        DioPoly::Param(i) => ETerm::Val(nu.get(*i)),
        DioPoly::Cst(n) => ETerm::Val(nat(*n)),
        DioPoly::Add(a, b) => {
            let ta = poly_atoms(a, nu, next, atoms);
            let tb = poly_atoms(b, nu, next, atoms);
            let aux = *next;
            *next += 1;
            atoms.push(EAtom::Add(ETerm::Var(aux), ta, tb));
            ETerm::Var(aux)
        }
        DioPoly::Mul(a, b) => {
            let ta = poly_atoms(a, nu, next, atoms);
            let tb = poly_atoms(b, nu, next, atoms);
            let aux = *next;
            *next += 1;
            atoms.push(EAtom::Mul(ETerm::Var(aux), ta, tb));
            ETerm::Var(aux)
        }
    }
}

/// Search for a solution of a single equation with every equation variable
/// bounded by `bound`.  The returned assignment covers variables
/// `0..max_var+1` of the equation; auxiliary subterm values used internally
/// are not part of the result.
pub fn sat_single(e: &DioSingle, nu: &Valuation, bound: &Nat) -> SatOutcome {
    let nvars = e.max_uvar().map_or(0, |m| m + 1);
    let mut next = nvars;
    let mut atoms = Vec::new();
    let lhs = poly_atoms(&e.lhs, nu, &mut next, &mut atoms);
    let rhs = poly_atoms(&e.rhs, nu, &mut next, &mut atoms);
    atoms.push(EAtom::Eq(lhs, rhs));
    // Original variables are numbered first, so search always branches on
    // them; auxiliaries are pinned by propagation once the originals are set.
    let get = |u: usize| if u < nvars { Some(bound.clone()) } else { None };
    match solve_conjunction(&atoms, next, &get) {
        Some(mut sol) => {
            sol.truncate(nvars);
            SatOutcome::Sat(sol)
        }
        None => SatOutcome::NoneUpTo(bound.clone()),
    }
}

/// Exhaustive search for an integer root of `p` over `[-bound, bound]^nvars`,
/// restricted to `lo <= phi(0) <= hi` for the first variable.  Returns the
/// lexicographically smallest root of the slice, if any.
pub fn sat_z_shard(p: &ZPoly, nvars: usize, bound: &Nat, lo: &Int, hi: &Int) -> Option<Vec<Int>> {
    let b = Int::from(bound.clone());
    fn rec(p: &ZPoly, phi: &mut Vec<Int>, nvars: usize, lo: &Int, hi: &Int) -> Option<Vec<Int>> {
        if phi.len() == nvars {
            return if crate::dio::h10z_eval(p, phi).is_zero() {
                Some(phi.clone())
            } else {
                None
            };
        }
        let mut v = lo.clone();
        while v <= *hi {
            phi.push(v.clone());
            if let Some(sol) = rec(p, phi, nvars, lo, hi) {
                return Some(sol);
            }
            phi.pop();
            v += Int::one();
        }
        None
    }
    // First variable ranges over the shard, the rest over the full box.
    let (full_lo, full_hi) = (-b.clone(), b);
    if nvars == 0 {
        return rec(p, &mut Vec::new(), 0, &full_lo, &full_hi);
    }
    let mut v = if lo < &full_lo { full_lo.clone() } else { lo.clone() };
    let top = if hi > &full_hi { full_hi.clone() } else { hi.clone() };
    while v <= top {
        let mut phi = vec![v.clone()];
        if let Some(sol) = rec(p, &mut phi, nvars, &full_lo, &full_hi) {
            return Some(sol);
        }
        v += Int::one();
    }
    None
}

/// Exhaustive search for an integer root of `p` over `[-bound, bound]^nvars`.
/// Returns the lexicographically smallest root, if any.
pub fn sat_z(p: &ZPoly, nvars: usize, bound: &Nat) -> Option<Vec<Int>> {
    let b = Int::from(bound.clone());
    sat_z_shard(p, nvars, bound, &(-b.clone()), &b)
}

/// Re-check a claimed solution of an integer polynomial.
pub fn verify_z(p: &ZPoly, phi: &[Int]) -> bool {
    crate::dio::h10z_eval(p, phi).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dio::{cstrs_eval, elem_to_single, single_eval, DioCstr};
    use crate::int;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn brute_force(l: &[DioCstr], nu: &Valuation, bound: u64) -> Option<Vec<Nat>> {
        let (_, nvars) = cstr_atoms(l, nu);
        let mut phi = vec![0u64; nvars];
        loop {
            let cand: Vec<Nat> = phi.iter().map(|&x| nat(x)).collect();
            if cstrs_eval(l, nu, &cand) {
                return Some(cand);
            }
            // odometer in lexicographic order: bump the last coordinate
            let mut i = nvars;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                if phi[i] < bound {
                    phi[i] += 1;
                    for x in phi[i + 1..].iter_mut() {
                        *x = 0;
                    }
                    break;
                }
            }
        }
    }

    fn random_cstrs(rng: &mut ChaCha8Rng, nvars: usize, len: usize) -> Vec<DioCstr> {
        (0..len)
            .map(|_| {
                let v = |rng: &mut ChaCha8Rng| rng.gen_range(0..nvars);
                match rng.gen_range(0..5) {
                    0 => DioCstr::EqCst(v(rng), rng.gen_range(0..5)),
                    1 => DioCstr::EqU(v(rng), v(rng)),
                    2 => DioCstr::EqParam(v(rng), rng.gen_range(0..2)),
                    3 => DioCstr::EqAdd(v(rng), v(rng), v(rng)),
                    _ => DioCstr::EqMul(v(rng), v(rng), v(rng)),
                }
            })
            .collect()
    }

    #[test]
    fn matches_brute_force_and_is_lex_minimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5a7);
        for round in 0..250 {
            let len = rng.gen_range(1..5);
            let l = random_cstrs(&mut rng, 3, len);
            let nu = Valuation::of_prefix(vec![nat(rng.gen_range(0..4)), nat(rng.gen_range(0..4))]);
            let bound = 4u64;
            let expect = brute_force(&l, &nu, bound);
            match sat_cstrs(&l, &nu, &nat(bound)) {
                SatOutcome::Sat(sol) => {
                    assert!(cstrs_eval(&l, &nu, &sol), "unsound at round {}", round);
                    assert_eq!(Some(sol), expect, "not lex-minimal at round {}", round);
                }
                SatOutcome::NoneUpTo(_) => {
                    assert_eq!(expect, None, "missed solution at round {}", round);
                }
            }
        }
    }

    #[test]
    fn bound_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x600d);
        for _ in 0..120 {
            let len = rng.gen_range(1..5);
            let l = random_cstrs(&mut rng, 3, len);
            let nu = Valuation::of_prefix(vec![nat(rng.gen_range(0..4))]);
            let small = sat_cstrs(&l, &nu, &nat(2));
            let large = sat_cstrs(&l, &nu, &nat(6));
            if let SatOutcome::Sat(sol) = &small {
                // a solution stays a solution, and the lex minimum can only
                // stay or shrink when the bound grows
                assert!(cstrs_eval(&l, &nu, sol));
                match &large {
                    SatOutcome::Sat(sol2) => assert!(sol2 <= sol),
                    SatOutcome::NoneUpTo(_) => panic!("solution lost at larger bound"),
                }
            }
        }
    }

    #[test]
    fn per_variable_bounds_are_respected() {
        // u0 = u1 + u2 with u0 pinned to 9 and u1 capped at 2
        let l = vec![DioCstr::EqCst(0, 9), DioCstr::EqAdd(0, 1, 2)];
        let nu = Valuation::zero();
        match sat_cstrs_with_bounds(&l, &nu, &[nat(9), nat(2), nat(9)]) {
            SatOutcome::Sat(sol) => assert_eq!(sol, vec![nat(9), nat(0), nat(9)]),
            other => panic!("expected solution, got {:?}", other),
        }
        // now cap the third variable too low as well
        match sat_cstrs_with_bounds(&l, &nu, &[nat(9), nat(2), nat(6)]) {
            SatOutcome::NoneUpTo(_) => {}
            other => panic!("expected failure, got {:?}", other),
        }
    }

    #[test]
    fn single_equation_search_agrees_with_constraint_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x51e);
        for _ in 0..150 {
            let len = rng.gen_range(1..4);
            let l = random_cstrs(&mut rng, 3, len);
            let nu = Valuation::of_prefix(vec![nat(rng.gen_range(0..3)), nat(rng.gen_range(0..3))]);
            let e = elem_to_single(&l);
            let a = sat_cstrs(&l, &nu, &nat(4));
            let b = sat_single(&e, &nu, &nat(4));
            match (&a, &b) {
                (SatOutcome::Sat(x), SatOutcome::Sat(y)) => {
                    assert!(cstrs_eval(&l, &nu, y));
                    assert!(single_eval(&e, &nu, x));
                    assert_eq!(x, y, "lex minima differ");
                }
                (SatOutcome::NoneUpTo(_), SatOutcome::NoneUpTo(_)) => {}
                _ => panic!("disagreement: {:?} vs {:?}", a, b),
            }
        }
    }

    #[test]
    fn integer_search_finds_negative_roots() {
        // x + 3 = 0 has the root -3
        let p = ZPoly::Add(
            Box::new(ZPoly::Var(0)),
            Box::new(ZPoly::Cst(3)),
        );
        assert_eq!(sat_z(&p, 1, &nat(5)), Some(vec![int(-3)]));
        // x^2 - 2 has no integer root
        let q = ZPoly::Add(
            Box::new(ZPoly::Mul(Box::new(ZPoly::Var(0)), Box::new(ZPoly::Var(0)))),
            Box::new(ZPoly::Cst(-2)),
        );
        assert_eq!(sat_z(&q, 1, &nat(50)), None);
    }

    #[test]
    fn shards_min_reduce_to_the_full_search() {
        // x^2 = y + 2, several roots in the box
        let p = ZPoly::Add(
            Box::new(ZPoly::Mul(Box::new(ZPoly::Var(0)), Box::new(ZPoly::Var(0)))),
            Box::new(ZPoly::Add(
                Box::new(ZPoly::Mul(Box::new(ZPoly::Cst(-1)), Box::new(ZPoly::Var(1)))),
                Box::new(ZPoly::Cst(-2)),
            )),
        );
        let full = sat_z(&p, 2, &nat(4));
        let mut best: Option<Vec<Int>> = None;
        for lo in -4i64..=4 {
            let shard = sat_z_shard(&p, 2, &nat(4), &int(lo), &int(lo));
            if let Some(s) = shard {
                assert!(verify_z(&p, &s));
                best = match best {
                    None => Some(s),
                    Some(b) => Some(if s < b { s } else { b }),
                };
            }
        }
        assert_eq!(full, best);
        assert!(full.is_some());
    }
}
