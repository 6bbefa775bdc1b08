//! The hard Diophantine builders: the exponential relation via the Pell
//! sequence, bitwise operators through binomial parity, sparse-cipher
//! elimination of bounded universal quantifiers, iteration and
//! reflexive-transitive closure, FRACTRAN step/stop/halting predicates, the
//! Godel-encoding function, and the final assembly turning a register
//! machine into a single equation.
//!
//! Everything here manipulates [`DioForm`] shapes with the conventions of
//! the `logic` module: a *function shape* equates variable `x_0` with a
//! value computed from inputs `x_1, x_2, ...`; a *relation* talks about
//! `x_0, x_1, ...` directly.  Exponentiation appears inside many builders,
//! so those accept it as a pluggable [`PowBuilder`]: production code passes
//! [`expo_fun`], while tests that need to evaluate the output with the
//! bounded solver can pass a small [`table_pow`] lookup instead.

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::compilers::{mm_remove_self_loops, mm_to_fractran, CompileError};
use crate::dio::elem::{form_to_elem, DioCstr};
use crate::dio::logic::{
    df_size, fun_cst, fun_mult, fun_plus, fun_rename, fun_var, rel_conj, rel_disj, rel_divides,
    rel_exists, rel_false, rel_fun_eq, rel_lt, rel_ndivides, rel_true, DioForm, Renaming,
};
use crate::dio::single::{elem_to_single, finitize_vars, DioPoly, DioSingle};
use crate::models::{FractranProg, MMProg};
use crate::numtheory::{reg_prime, state_prime};
use crate::{nat, Nat};

/// Builder for the function shape `x_0 = f^g` given two operand shapes.
pub type PowBuilder<'a> = dyn Fn(&DioForm, &DioForm) -> DioForm + 'a;

// ---------------------------------------------------------------------------
// Small shape helpers.
// ---------------------------------------------------------------------------

fn sh(k: usize, f: &DioForm) -> DioForm {
    fun_rename(&Renaming::shift(k), f)
}

fn p2(a: &DioForm, b: &DioForm) -> DioForm {
    fun_plus(a, b)
}

fn m2(a: &DioForm, b: &DioForm) -> DioForm {
    fun_mult(a, b)
}

fn conj_all(mut parts: Vec<DioForm>) -> DioForm {
    let mut acc = parts.pop().expect("non-empty conjunction");
    while let Some(q) = parts.pop() {
        acc = rel_conj(q, acc);
    }
    acc
}

fn exists_n(k: usize, body: DioForm) -> DioForm {
    let mut acc = body;
    for _ in 0..k {
        acc = rel_exists(acc);
    }
    acc
}

/// Shape of an arbitrary-precision constant: small values are a single
/// atom, larger ones a base 2^32 Horner scheme.
pub fn fun_cst_nat(n: &Nat) -> DioForm {
    match u64::try_from(n) {
        Ok(v) => fun_cst(v),
        Err(_) => {
            let digits = n.to_u32_digits(); // little-endian
            let base = fun_cst(1u64 << 32);
            let mut acc = fun_cst(u64::from(*digits.last().expect("non-zero")));
            for d in digits.iter().rev().skip(1) {
                acc = p2(&fun_cst(u64::from(*d)), &m2(&base, &acc));
            }
            acc
        }
    }
}

// ---------------------------------------------------------------------------
// The alpha (Pell) relation and the exponential.
// ---------------------------------------------------------------------------

/// Pell adjacency `x^2 + y^2 = 1 + b*x*y` together with `x < y`: over the
/// naturals this pins `(x, y)` to a consecutive pair of the base-`b`
/// sequence `0, 1, b, b^2-1, ...`.
fn adj(x: &DioForm, y: &DioForm, base: &DioForm) -> DioForm {
    rel_conj(
        rel_fun_eq(
            &p2(&m2(x, x), &m2(y, y)),
            &p2(&fun_cst(1), &m2(base, &m2(x, y))),
        ),
        rel_lt(x, y),
    )
}

/// `exists d, x = y + d * m`.
fn eq_mod(x: &DioForm, y: &DioForm, m: &DioForm) -> DioForm {
    let (x1, y1, m1) = (sh(1, x), sh(1, y), sh(1, m));
    rel_exists(rel_fun_eq(&x1, &p2(&y1, &m2(&fun_var(0), &m1))))
}

/// Two-sided congruence `m | x - y` over the naturals.
fn cong(x: &DioForm, y: &DioForm, m: &DioForm) -> DioForm {
    rel_disj(eq_mod(x, y, m), eq_mod(y, x, m))
}

/// Relation `3 < b  and  a = alpha_b(c)` where `alpha_b` is the second-order
/// sequence `alpha(0) = 0, alpha(1) = 1, alpha(n+2) = b*alpha(n+1) - alpha(n)`.
/// The system pins the index with a second Pell pair over a shifted base:
/// the pair `(a, v)` is adjacent in base `b`, a large adjacent pair `(u, w)`
/// has `v^2 | u`, the base `B` agrees with `b` modulo `v` and with `2` modulo
/// `2a`, and a base-`B` pair `(t, s)` ties the value (mod `v`) to the index
/// (mod `2a`).
pub fn alpha_system(a: &DioForm, b: &DioForm, c: &DioForm) -> DioForm {
    // zero case: alpha_b(0) = 0
    let zero = rel_conj(
        rel_conj(rel_lt(&fun_cst(3), b), rel_fun_eq(a, &fun_cst(0))),
        rel_fun_eq(c, &fun_cst(0)),
    );
    // main case, under six binders v u w B t s (x_0 = v .. x_5 = s)
    const V: usize = 0;
    const U: usize = 1;
    const W: usize = 2;
    const B: usize = 3;
    const T: usize = 4;
    const S: usize = 5;
    let (a6, b6, c6) = (sh(6, a), sh(6, b), sh(6, c));
    let two_a = m2(&fun_cst(2), &a6);
    let parts = vec![
        rel_lt(&fun_cst(3), &b6),
        adj(&a6, &fun_var(V), &b6),
        adj(&fun_var(U), &fun_var(W), &b6),
        rel_lt(&fun_var(V), &fun_var(U)),
        rel_divides(&m2(&fun_var(V), &fun_var(V)), &fun_var(U)),
        eq_mod(&fun_var(B), &b6, &fun_var(V)),
        eq_mod(&fun_var(B), &fun_cst(2), &two_a),
        adj(&fun_var(T), &fun_var(S), &fun_var(B)),
        cong(&fun_var(T), &a6, &fun_var(V)),
        cong(&fun_var(T), &c6, &two_a),
        rel_lt(&c6, &two_a),
    ];
    rel_disj(zero, exists_n(6, conj_all(parts)))
}

/// Canonical instance of [`alpha_system`] over the variables `(a, b, c) =
/// (x_0, x_1, x_2)`.
pub fn alpha_formula() -> DioForm {
    alpha_system(&fun_var(0), &fun_var(1), &fun_var(2))
}

/// Function shape `x_0 = f^g`.  The cases `g = 0` and `f = 0 < g` are
/// direct; otherwise `b := alpha_{f+4}(g+1) + f + 1` makes `m := b*f - f^2
/// - 1` exceed `f^g`, and `f * alpha_b(g) - alpha_b(g-1) = f^g (mod m)`
/// recovers the power from two adjacent values of the base-`b` sequence.
pub fn expo_fun(f: &DioForm, g: &DioForm) -> DioForm {
    let xs = fun_var(0);
    let ys = sh(1, f);
    let zs = sh(1, g);
    let trivial_exp = rel_conj(rel_fun_eq(&zs, &fun_cst(0)), rel_fun_eq(&xs, &fun_cst(1)));
    let trivial_base = conj_all(vec![
        rel_fun_eq(&ys, &fun_cst(0)),
        rel_lt(&fun_cst(0), &zs),
        rel_fun_eq(&xs, &fun_cst(0)),
    ]);
    // main case, under five binders g b m t p (x_0 = g .. x_4 = p);
    // p is the smaller Pell companion of t, i.e. alpha_b(z - 1)
    const GG: usize = 0;
    const BB: usize = 1;
    const MM: usize = 2;
    const TT: usize = 3;
    const PP: usize = 4;
    let (xs5, ys5, zs5) = (sh(5, &xs), sh(5, &ys), sh(5, &zs));
    let parts = vec![
        alpha_system(&fun_var(GG), &p2(&ys5, &fun_cst(4)), &p2(&zs5, &fun_cst(1))),
        rel_fun_eq(&fun_var(BB), &p2(&fun_var(GG), &p2(&ys5, &fun_cst(1)))),
        rel_fun_eq(
            &p2(&fun_var(MM), &p2(&m2(&ys5, &ys5), &fun_cst(1))),
            &m2(&fun_var(BB), &ys5),
        ),
        alpha_system(&fun_var(TT), &fun_var(BB), &zs5),
        adj(&fun_var(PP), &fun_var(TT), &fun_var(BB)),
        eq_mod(
            &m2(&ys5, &fun_var(TT)),
            &p2(&fun_var(PP), &xs5),
            &fun_var(MM),
        ),
        rel_lt(&xs5, &fun_var(MM)),
    ];
    let main = conj_all(vec![
        rel_lt(&fun_cst(0), &ys),
        rel_lt(&fun_cst(0), &zs),
        exists_n(5, conj_all(parts)),
    ]);
    rel_disj(trivial_exp, rel_disj(trivial_base, main))
}

/// Canonical instance of [`expo_fun`]: `x_0 = x_1 ^ x_2`.
pub fn expo_formula() -> DioForm {
    expo_fun(&fun_var(0), &fun_var(1))
}

/// Finite-table stand-in for the exponential: a disjunction asserting
/// `f = base, g = exp, x_0 = base^exp` over the given pairs.  Small enough
/// for the bounded evaluator, so the builders that compose an exponential
/// can be checked semantically on tiny instances.
pub fn table_pow(entries: &[(u64, u64)]) -> impl Fn(&DioForm, &DioForm) -> DioForm + '_ {
    move |f: &DioForm, g: &DioForm| {
        let (f1, g1) = (sh(1, f), sh(1, g));
        let mut it = entries.iter().map(|&(b, e)| {
            let value = b
                .checked_pow(u32::try_from(e).expect("table exponent"))
                .expect("table power fits in u64");
            conj_all(vec![
                fun_cst(value),
                rel_fun_eq(&f1, &fun_cst(b)),
                rel_fun_eq(&g1, &fun_cst(e)),
            ])
        });
        let first = it.next().expect("non-empty power table");
        it.fold(first, rel_disj)
    }
}

// ---------------------------------------------------------------------------
// Digits, binomials and bitwise operators.
// ---------------------------------------------------------------------------

/// `d` is the `n`-th digit of `c` in base `q`:
/// `d < q  and  exists a b, c = (a*q + d)*q^n + b  and  b < q^n`.
pub fn is_digit_formula_with(
    pow: &PowBuilder,
    c: &DioForm,
    q: &DioForm,
    n: &DioForm,
    d: &DioForm,
) -> DioForm {
    // binders: x_0 = q^n, x_1 = low part b, x_2 = high part a
    let (c3, q3, n3, d3) = (sh(3, c), sh(3, q), sh(3, n), sh(3, d));
    let body = conj_all(vec![
        rel_fun_eq(&fun_var(0), &pow(&q3, &n3)),
        rel_fun_eq(
            &c3,
            &p2(
                &m2(&p2(&m2(&fun_var(2), &q3), &d3), &fun_var(0)),
                &fun_var(1),
            ),
        ),
        rel_lt(&fun_var(1), &fun_var(0)),
    ]);
    rel_conj(rel_lt(d, q), exists_n(3, body))
}

/// As [`is_digit_formula_with`] with the production exponential.
pub fn is_digit_formula(c: &DioForm, q: &DioForm, n: &DioForm, d: &DioForm) -> DioForm {
    is_digit_formula_with(&expo_fun, c, q, n, d)
}

/// `d` is the binomial coefficient `C(b, a)`: the `a`-th digit of
/// `(1 + Q)^b` in base `Q = 2^(b+1)`, which the binomial theorem makes the
/// coefficient itself (no digit ever carries at that base).
pub fn binomial_formula_with(pow: &PowBuilder, b: &DioForm, a: &DioForm, d: &DioForm) -> DioForm {
    // binders: x_0 = the expansion (1+Q)^b, x_1 = the base Q
    let (b2, a2, d2) = (sh(2, b), sh(2, a), sh(2, d));
    let body = conj_all(vec![
        rel_fun_eq(&fun_var(1), &pow(&fun_cst(2), &p2(&b2, &fun_cst(1)))),
        rel_fun_eq(&fun_var(0), &pow(&p2(&fun_cst(1), &fun_var(1)), &b2)),
        is_digit_formula_with(pow, &fun_var(0), &fun_var(1), &a2, &d2),
    ]);
    exists_n(2, body)
}

/// Bit-domination `a` masked-below `b`: every binary digit of `a` is at most
/// the corresponding digit of `b`, Diophantine because it is equivalent to
/// `C(b, a)` being odd.
pub fn masked_le_formula_with(pow: &PowBuilder, a: &DioForm, b: &DioForm) -> DioForm {
    // binders: x_0 = witness of oddness, x_1 = the binomial value
    let (a2, b2) = (sh(2, a), sh(2, b));
    let body = rel_conj(
        binomial_formula_with(pow, &b2, &a2, &fun_var(1)),
        rel_fun_eq(&fun_var(1), &p2(&m2(&fun_cst(2), &fun_var(0)), &fun_cst(1))),
    );
    exists_n(2, body)
}

/// As [`masked_le_formula_with`] with the production exponential.
pub fn masked_le_formula(a: &DioForm, b: &DioForm) -> DioForm {
    masked_le_formula_with(&expo_fun, a, b)
}

/// Digit-by-digit AND: `a & b = c` holds iff `c` is dominated by both
/// inputs and the leftovers `a - c` and `b - c` share no bit, the latter
/// expressed as a carry-free sum.
pub fn digitwise_and_formula_with(
    pow: &PowBuilder,
    a: &DioForm,
    b: &DioForm,
    c: &DioForm,
) -> DioForm {
    let (a2, b2, c2) = (sh(2, a), sh(2, b), sh(2, c));
    // binders: x_0 = b - c, x_1 = a - c
    let leftovers = conj_all(vec![
        rel_fun_eq(&a2, &p2(&c2, &fun_var(1))),
        rel_fun_eq(&b2, &p2(&c2, &fun_var(0))),
        masked_le_formula_with(pow, &fun_var(1), &p2(&fun_var(1), &fun_var(0))),
    ]);
    conj_all(vec![
        masked_le_formula_with(pow, c, a),
        masked_le_formula_with(pow, c, b),
        exists_n(2, leftovers),
    ])
}

/// Host-level digit-by-digit AND (plain bitwise AND on naturals).
pub fn digitwise_and(x: &Nat, y: &Nat) -> Nat {
    x & y
}

/// Host-level `is_digit` predicate matching [`is_digit_formula_with`].
pub fn is_digit(c: &Nat, q: &Nat, n: usize, d: &Nat) -> bool {
    if d >= q || q <= &Nat::one() {
        return d < q && (n > 0 || (c % q) == *d) && c < &q.pow(1 + n as u32);
    }
    let digits = crate::numtheory::base_digits(c, q);
    digits.get(n).cloned().unwrap_or_else(Nat::zero) == *d
}

// ---------------------------------------------------------------------------
// Sparse ciphers (host level).
// ---------------------------------------------------------------------------

/// A vector of naturals below `2^q` packed as `sum_i a_i * r^(2^i)` for
/// `i = 1..n`, with radix `r = 2^(4q)`: only the digits at the sparse
/// positions `r^(2^i)` are ever non-zero, and the generous radix leaves
/// room for digit products without spill-over between positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cipher {
    pub q: u64,
    pub n: usize,
    pub value: Nat,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CipherError {
    #[error("component {0} does not fit in {1} bits")]
    DigitOverflow(Nat, u64),
}

impl Cipher {
    /// The radix `r = 2^(4q)`.
    pub fn radix(&self) -> Nat {
        Nat::one() << (4 * self.q)
    }
}

/// Pack a vector of components below `2^q`.
pub fn cipher_encode(v: &[Nat], q: u64) -> Result<Cipher, CipherError> {
    let limit = Nat::one() << q;
    let mut value = Nat::zero();
    for (i, a) in v.iter().enumerate() {
        if *a >= limit {
            return Err(CipherError::DigitOverflow(a.clone(), q));
        }
        value += a << (4 * q * (1u64 << (i + 1)));
    }
    Ok(Cipher { q, n: v.len(), value })
}

/// Read the components back out of the sparse positions.
pub fn cipher_decode(c: &Cipher) -> Vec<Nat> {
    let mask = (Nat::one() << c.q) - Nat::one();
    (1..=c.n)
        .map(|i| (&c.value >> (4 * c.q * (1u64 << i))) & &mask)
        .collect()
}

/// The all-ones cipher `u = sum_i r^(2^i)`.
pub fn cipher_ones(q: u64, n: usize) -> Cipher {
    cipher_encode(&vec![Nat::one(); n], q).expect("1 < 2^q")
}

/// The shifted ones constant `u' = sum_{i=2}^{n+1} r^(2^i)`: the diagonal
/// positions that squaring `u` lights up.
pub fn cipher_ones_shift(q: u64, n: usize) -> Nat {
    let mut value = Nat::zero();
    for i in 2..=(n + 1) {
        value += Nat::one() << (4 * q * (1u64 << i));
    }
    value
}

/// The dense mask `w = sum_{i=0}^{2^(n+1)} r^i`: digit 1 at every base-`r`
/// position up to and including the top sparse position.
pub fn cipher_mask(q: u64, n: usize) -> Nat {
    let top = 1u64 << (n + 1);
    let mut value = Nat::zero();
    for i in 0..=top {
        value += Nat::one() << (4 * q * i);
    }
    value
}

/// Masked product: multiply the raw values and keep only the full digits at
/// the diagonal positions, where the componentwise products accumulate.
/// With radix `2^(4q)` no cross term can carry into a diagonal, so this
/// equals the masked product of the componentwise-product cipher with the
/// ones cipher.
pub fn cipher_mult_mask(b: &Cipher, c: &Cipher) -> Nat {
    assert_eq!((b.q, b.n), (c.q, c.n), "cipher shapes must agree");
    let r = b.radix();
    let mask = (&r - Nat::one()) * cipher_ones_shift(b.q, b.n);
    digitwise_and(&(&b.value * &c.value), &mask)
}

// ---------------------------------------------------------------------------
// Bounded universal quantification.
// ---------------------------------------------------------------------------

/// `forall y < f nu, T(y, nu)` as a relation.  `t`'s variable `x_0` is the
/// quantified position and `x_{1+i}` its view of the ambient `x_i`.
///
/// The body is first normalised to elementary constraints; each constraint
/// is then restated about ciphers that carry, in parallel digit positions,
/// the constraint variable's value at every `y` below the bound.  Additions
/// act componentwise on ciphers directly, multiplications through the
/// masked-product identity, constants and parameters through multiples of
/// the ones cipher `u`, and the quantified variable itself through a
/// progression cipher `D` pinned by a shift equation.  The digit width `q`
/// is existential: any width large enough for the witnessing values works.
pub fn bounded_forall_with(pow: &PowBuilder, f: &DioForm, t: &DioForm) -> DioForm {
    let elem = form_to_elem(t, 0);
    let width = elem.width;
    let cstrs = elem.zero_test();

    // Binder layout, innermost first: the constraint ciphers c_0 .. c_{width-1},
    // then the shared machinery.
    let d = width; // progression cipher, components 0..n-1
    let up = width + 1; // shifted ones u'
    let uu = width + 2; // ones cipher u
    let ww = width + 3; // dense mask w
    let ee = width + 4; // top position r^(2^(n+1))
    let hh = width + 5; // 2^(n+1)
    let rr = width + 6; // radix r = 2^(4q)
    let pp = width + 7; // digit bound 2^q
    let qq = width + 8; // digit width q
    let nn = width + 9; // the bound n = f nu
    let mk = width + 10; // full-digit diagonal mask (r-1)*u'
    let pu = width + 11; // digit-validity mask (p-1)*u
    let nvars = width + 12;
    let var = fun_var;

    let mut parts = vec![
        rel_fun_eq(&var(nn), &sh(nvars, f)),
        rel_lt(&fun_cst(0), &var(qq)),
        rel_fun_eq(&var(pp), &pow(&fun_cst(2), &var(qq))),
        rel_fun_eq(&var(rr), &m2(&m2(&var(pp), &var(pp)), &m2(&var(pp), &var(pp)))),
        rel_fun_eq(&var(hh), &pow(&fun_cst(2), &p2(&var(nn), &fun_cst(1)))),
        rel_fun_eq(&var(ee), &pow(&var(rr), &var(hh))),
        // (r-1)*w + 1 = r*e, i.e. w is the all-ones number below r*e
        rel_fun_eq(
            &p2(&m2(&var(rr), &var(ww)), &fun_cst(1)),
            &p2(&var(ww), &m2(&var(rr), &var(ee))),
        ),
        // the two derived masks
        rel_fun_eq(&p2(&var(mk), &var(up)), &m2(&var(rr), &var(up))),
        rel_fun_eq(&p2(&var(pu), &var(uu)), &m2(&var(pp), &var(uu))),
        // u has binary support inside w, its square's low digit bits are
        // exactly the shifted ones, and the diagonal equation walks the
        // sparse positions: together these pin u to the ones cipher
        masked_le_formula_with(pow, &var(uu), &var(ww)),
        digitwise_and_formula_with(pow, &m2(&var(uu), &var(uu)), &var(ww), &var(up)),
        rel_fun_eq(
            &p2(&m2(&var(rr), &var(rr)), &var(up)),
            &p2(&var(uu), &var(ee)),
        ),
        // progression cipher: valid digits below 2^q, n itself fits, and
        // shifting D through a masked product against u advances every
        // component by one, which forces digits 0, 1, ..., n-1
        rel_lt(&var(nn), &var(pp)),
        masked_le_formula_with(pow, &var(d), &var(pu)),
    ];
    // shift(D) + shift-of-ones = D + n*e restated with masked products:
    // and(u*D, mk) + u' = D + n*e
    parts.push(exists_n(
        1,
        rel_conj(
            digitwise_and_formula_with(
                pow,
                &m2(&sh(1, &var(uu)), &sh(1, &var(d))),
                &sh(1, &var(mk)),
                &fun_var(0),
            ),
            rel_fun_eq(
                &p2(&fun_var(0), &sh(1, &var(up))),
                &p2(&sh(1, &var(d)), &m2(&sh(1, &var(nn)), &sh(1, &var(ee)))),
            ),
        ),
    ));

    // constraint counterparts
    for cstr in &cstrs {
        let part = match *cstr {
            DioCstr::EqCst(j, m) => rel_fun_eq(&var(j), &m2(&fun_cst(m), &var(uu))),
            DioCstr::EqU(j, k) => rel_fun_eq(&var(j), &var(k)),
            DioCstr::EqParam(j, 0) => rel_fun_eq(&var(j), &var(d)),
            DioCstr::EqParam(j, i) => {
                rel_fun_eq(&var(j), &m2(&fun_var(nvars + (i - 1)), &var(uu)))
            }
            DioCstr::EqAdd(j, a, b) => rel_fun_eq(&var(j), &p2(&var(a), &var(b))),
            DioCstr::EqMul(j, a, b) => {
                // digit validity on the operands, then equality of the
                // masked products c_j * u and c_a * c_b
                let masked = exists_n(
                    1,
                    rel_conj(
                        digitwise_and_formula_with(
                            pow,
                            &m2(&sh(1, &var(j)), &sh(1, &var(uu))),
                            &sh(1, &var(mk)),
                            &fun_var(0),
                        ),
                        digitwise_and_formula_with(
                            pow,
                            &m2(&sh(1, &var(a)), &sh(1, &var(b))),
                            &sh(1, &var(mk)),
                            &fun_var(0),
                        ),
                    ),
                );
                conj_all(vec![
                    masked_le_formula_with(pow, &var(a), &var(pu)),
                    masked_le_formula_with(pow, &var(b), &var(pu)),
                    masked,
                ])
            }
        };
        parts.push(part);
    }

    let main = exists_n(nvars, conj_all(parts));
    rel_disj(rel_fun_eq(f, &fun_cst(0)), main)
}

/// As [`bounded_forall_with`] with the production exponential.
pub fn bounded_forall(f: &DioForm, t: &DioForm) -> DioForm {
    bounded_forall_with(&expo_fun, f, t)
}

// ---------------------------------------------------------------------------
// Iteration and reflexive-transitive closure.
// ---------------------------------------------------------------------------

/// The first `i+1` base-`q` digits of `c` form a chain of the binary
/// relation `r` (given over `(x_1, x_0)` with no other free variables).
pub fn is_seq_formula_with(
    pow: &PowBuilder,
    r: &DioForm,
    c: &DioForm,
    q: &DioForm,
    i: &DioForm,
) -> DioForm {
    // body for the bounded quantifier: x_0 = chain position, ambient
    // shifted by one; inside two more binders x_1 = current digit,
    // x_0 = next digit, so r applies verbatim
    let (c3, q3) = (sh(3, c), sh(3, q));
    let body = conj_all(vec![
        is_digit_formula_with(pow, &c3, &q3, &fun_var(2), &fun_var(1)),
        is_digit_formula_with(
            pow,
            &c3,
            &q3,
            &p2(&fun_var(2), &fun_cst(1)),
            &fun_var(0),
        ),
        r.clone(),
    ]);
    bounded_forall_with(pow, i, &exists_n(2, body))
}

/// `i`-fold iteration `r^i(u, v)`: some base-`q` development carries a
/// length `i+1` chain from `u` to `v`.  At `i = 0` the two digit reads
/// coincide, so the formula degenerates to `u = v` as it should.
pub fn rel_iter_formula_with(
    pow: &PowBuilder,
    r: &DioForm,
    i: &DioForm,
    u: &DioForm,
    v: &DioForm,
) -> DioForm {
    // binders: x_0 = the chain number c, x_1 = the base q
    let (i2, u2, v2) = (sh(2, i), sh(2, u), sh(2, v));
    let body = conj_all(vec![
        is_digit_formula_with(pow, &fun_var(0), &fun_var(1), &fun_cst(0), &u2),
        is_digit_formula_with(pow, &fun_var(0), &fun_var(1), &i2, &v2),
        is_seq_formula_with(pow, r, &fun_var(0), &fun_var(1), &i2),
    ]);
    exists_n(2, body)
}

/// Reflexive-transitive closure `r*(u, v) := exists i, r^i(u, v)`.
pub fn rt_closure_formula_with(
    pow: &PowBuilder,
    r: &DioForm,
    u: &DioForm,
    v: &DioForm,
) -> DioForm {
    exists_n(
        1,
        rel_iter_formula_with(pow, r, &fun_var(0), &sh(1, u), &sh(1, v)),
    )
}

/// Host-level iteration predicate for cross-checks.
pub fn rel_iter_host(r: &dyn Fn(&Nat, &Nat) -> bool, i: usize, u: &Nat, v: &Nat) -> bool {
    if i == 0 {
        return u == v;
    }
    // small-space check: a chain exists iff some middle value links both
    // halves; for test-sized relations a bounded scan is enough
    let bound = u.max(v) + nat(64);
    let mut reach = vec![u.clone()];
    for _ in 0..i {
        let mut next = Vec::new();
        let mut w = Nat::zero();
        while w <= bound {
            if reach.iter().any(|x| r(x, &w)) && !next.contains(&w) {
                next.push(w.clone());
            }
            w += Nat::one();
        }
        reach = next;
    }
    reach.contains(v)
}

// ---------------------------------------------------------------------------
// FRACTRAN predicates.
// ---------------------------------------------------------------------------

/// One step of the FRACTRAN program: `step Q (f nu) (g nu)` by induction on
/// the fraction list; the empty program never steps, and `p/q :: Q'` steps
/// through the head exactly when `q * g = p * f`, or through the tail when
/// the head does not fire.
pub fn fractran_step_formula(prog: &FractranProg, f: &DioForm, g: &DioForm) -> DioForm {
    let mut acc = rel_false();
    for (p, q) in prog.fractions.iter().rev() {
        let (pn, qn) = (fun_cst_nat(p), fun_cst_nat(q));
        let fires = rel_fun_eq(&m2(&qn, g), &m2(&pn, f));
        let skips = rel_ndivides(&qn, &m2(&pn, f));
        acc = rel_disj(fires, rel_conj(skips, acc));
    }
    acc
}

/// The program has terminated at `f nu`: no fraction fires.
pub fn fractran_stop_formula(prog: &FractranProg, f: &DioForm) -> DioForm {
    let mut acc = rel_true();
    for (p, q) in prog.fractions.iter().rev() {
        let (pn, qn) = (fun_cst_nat(p), fun_cst_nat(q));
        acc = rel_conj(rel_ndivides(&qn, &m2(&pn, f)), acc);
    }
    acc
}

/// The program halts from the start value `f nu`: some state reachable by
/// the step relation is a stopping state.
pub fn fractran_halting_formula_with(
    pow: &PowBuilder,
    prog: &FractranProg,
    f: &DioForm,
) -> DioForm {
    let step = fractran_step_formula(prog, &fun_var(1), &fun_var(0));
    let body = rel_conj(
        rt_closure_formula_with(pow, &step, &sh(1, f), &fun_var(0)),
        fractran_stop_formula(prog, &fun_var(0)),
    );
    exists_n(1, body)
}

/// As [`fractran_halting_formula_with`] with the production exponential.
pub fn fractran_halting_formula(prog: &FractranProg, f: &DioForm) -> DioForm {
    fractran_halting_formula_with(&expo_fun, prog, f)
}

// ---------------------------------------------------------------------------
// Godel encoding and the final assembly.
// ---------------------------------------------------------------------------

/// Function shape `x_0 = primes[0]^(x_1) * primes[1]^(x_2) * ...`: the
/// prime bases are hard-coded, the exponents are the inputs.
pub fn godel_exp_formula_with(pow: &PowBuilder, primes: &[u64]) -> DioForm {
    let mut acc = fun_cst(1);
    for (i, &pr) in primes.iter().enumerate().rev() {
        let factor = pow(&fun_cst(pr), &fun_var(i));
        acc = if i + 1 == primes.len() && primes.len() >= 1 {
            factor
        } else {
            m2(&factor, &acc)
        };
    }
    if primes.is_empty() {
        acc = fun_cst(1);
    }
    acc
}

/// Godel exponential over the first `n` register primes.
pub fn godel_exp_formula(n: usize) -> DioForm {
    let primes: Vec<u64> = (0..n).map(reg_prime).collect();
    godel_exp_formula_with(&expo_fun, &primes)
}

/// Everything the machine-to-equation assembly produces, with the size of
/// each intermediate stage for reporting.
#[derive(Debug, Clone, Serialize)]
pub struct DprmOutput {
    pub params: usize,
    pub uvars: usize,
    #[serde(skip)]
    pub equation: DioSingle,
    pub mm_instrs: usize,
    pub mm_no_self_loop_instrs: usize,
    pub fractions: usize,
    pub halting_formula_size: usize,
    pub elem_constraints: usize,
    pub single_size: usize,
}

/// Compile a register machine recognising a relation on its first `n`
/// registers (starting at PC 1, remaining registers zero) into a single
/// polynomial equation over naturals, solvable at parameters `v` exactly
/// when the machine halts from `(1, v ++ 0s)`.  Stages: self-loop removal,
/// the fraction translation, the Diophantine halting predicate applied to
/// the Godel encoding of the start state, elementary constraints, one
/// equation, and variable finitization with parameter projection.
pub fn dprm_pipeline_with(
    pow: &PowBuilder,
    prog: &MMProg,
    n: usize,
) -> Result<DprmOutput, CompileError> {
    let cleaned = mm_remove_self_loops(prog)?;
    let fractran = mm_to_fractran(&cleaned)?;
    // start state: PC 1, original register j (shifted to j+1) holds
    // parameter x_j, every other register zero
    let primes: Vec<u64> = (0..n).map(|j| reg_prime(j + 1)).collect();
    let start = m2(
        &fun_cst_nat(&nat(state_prime(1))),
        &godel_exp_formula_with(pow, &primes),
    );
    let halting = fractran_halting_formula_with(pow, &fractran, &start);
    let halting_size = df_size(&halting);
    let elem = form_to_elem(&halting, 0);
    let cstrs = elem.zero_test();
    let mut single = elem_to_single(&cstrs);
    project_params(&mut single.lhs, n);
    project_params(&mut single.rhs, n);
    let (uvars, equation) = finitize_vars(&single);
    Ok(DprmOutput {
        params: n,
        uvars,
        mm_instrs: prog.instrs.len(),
        mm_no_self_loop_instrs: cleaned.instrs.len(),
        fractions: fractran.fractions.len(),
        halting_formula_size: halting_size,
        elem_constraints: cstrs.len(),
        single_size: equation.size(),
        equation,
    })
}

/// As [`dprm_pipeline_with`] with the production exponential.
pub fn dprm_pipeline(prog: &MMProg, n: usize) -> Result<DprmOutput, CompileError> {
    dprm_pipeline_with(&expo_fun, prog, n)
}

/// Replace every parameter index `>= n` by the constant 0, in place and
/// without recursion (pipeline outputs nest deep).
fn project_params(p: &mut DioPoly, n: usize) {
    let mut stack: Vec<&mut DioPoly> = vec![p];
    while let Some(t) = stack.pop() {
        match t {
            DioPoly::Param(i) if *i >= n => *t = DioPoly::Cst(0),
            DioPoly::Add(a, b) | DioPoly::Mul(a, b) => {
                stack.push(a);
                stack.push(b);
            }
            _ => {}
        }
    }
}


/// Size of [`alpha_formula`] as first computed, pinned as a regression
/// value; a hand-optimized variant of the same system measures 1445, and
/// the gap is reported alongside the pinned value by the checks that use it.
pub fn alpha_canonical_size() -> usize {
    414
}

/// Size of [`expo_formula`] as first computed (hand-optimized reference:
/// 4903).
pub fn expo_canonical_size() -> usize {
    1115
}
