//! The Pell-style second order sequence `alpha_b` and its 2x2 matrix
//! presentation.
//!
//! `alpha_b(-1) = -1`, `alpha_b(0) = 0`, and
//! `alpha_b(n+2) = b * alpha_b(n+1) - alpha_b(n)`.  For `b = 2` this is the
//! identity sequence; for `b >= 3` it grows exponentially and its
//! divisibility structure is what makes exponentiation Diophantine.

use crate::{Int, Nat};
use num_traits::{One, Signed, Zero};

/// A 2x2 integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2 {
    pub a: Int,
    pub b: Int,
    pub c: Int,
    pub d: Int,
}

impl Mat2 {
    pub fn identity() -> Self {
        Mat2 { a: Int::one(), b: Int::zero(), c: Int::zero(), d: Int::one() }
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn pow(&self, mut n: u64) -> Mat2 {
        let mut acc = Mat2::identity();
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }
}

/// The coefficient matrix `B_b = [[b, -1], [1, 0]]`.
pub fn mat_b(b: &Nat) -> Mat2 {
    Mat2 { a: Int::from(b.clone()), b: -Int::one(), c: Int::one(), d: Int::zero() }
}

/// `A_b(n) = B_b^n`; its entries are
/// `[[alpha_b(n+1), -alpha_b(n)], [alpha_b(n), -alpha_b(n-1)]]`.
pub fn mat_a(b: &Nat, n: u64) -> Mat2 {
    mat_b(b).pow(n)
}

/// `alpha_b(n)` for `n >= -1`, computed by the linear recurrence.
pub fn alpha_int(b: &Nat, n: i64) -> Int {
    assert!(n >= -1, "alpha is defined from index -1 on");
    let b = Int::from(b.clone());
    let (mut prev, mut cur) = (-Int::one(), Int::zero()); // alpha(-1), alpha(0)
    for _ in 0..=n {
        let next = &b * &cur - &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    prev
}

/// `alpha_b(n)` as a natural number; for `b >= 2` and `n >= 0` the sequence
/// is non-negative.
pub fn alpha(b: &Nat, n: u64) -> Nat {
    let v = alpha_int(b, n as i64);
    assert!(!v.is_negative(), "alpha_b(n) negative: b < 2");
    v.to_biguint().unwrap()
}

/// Outcome of [`alpha_props_check`]: which property failed, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaProps {
    Ok,
    DivisibilityFailed { b: u64, k: u64, m: u64 },
    SquareDivisibilityFailed { b: u64, k: u64, m: u64 },
    CongruenceFailed { b: u64, n: u64 },
    IdentityAtTwoFailed { n: u64 },
}

/// Checks the divisibility and congruence laws of `alpha` over a finite
/// window:
///
/// * `alpha_b(k) | alpha_b(m)  <->  k | m` (for `k >= 1`),
/// * `alpha_b(k)^2 | alpha_b(m)  <->  k * alpha_b(k) | m` (for `k >= 1`),
/// * `alpha_b(n) = n  (mod b - 2)`,
/// * `alpha_2(n) = n`.
pub fn alpha_props_check(b_max: u64, idx_max: u64) -> AlphaProps {
    use num_integer::Integer;
    for n in 0..=idx_max {
        if alpha(&Nat::from(2u64), n) != Nat::from(n) {
            return AlphaProps::IdentityAtTwoFailed { n };
        }
    }
    for b in 3..=b_max {
        let bn = Nat::from(b);
        let table: Vec<Nat> = (0..=idx_max).map(|i| alpha(&bn, i)).collect();
        for k in 1..=idx_max {
            for m in 0..=idx_max {
                let div_val = table[m as usize].is_multiple_of(&table[k as usize]);
                if div_val != (m % k == 0) {
                    return AlphaProps::DivisibilityFailed { b, k, m };
                }
                let sq = &table[k as usize] * &table[k as usize];
                let sq_val = table[m as usize].is_multiple_of(&sq);
                let kak = Nat::from(k) * &table[k as usize];
                let idx_div = Nat::from(m).is_multiple_of(&kak);
                if sq_val != idx_div {
                    return AlphaProps::SquareDivisibilityFailed { b, k, m };
                }
            }
        }
        let modulus = Nat::from(b - 2);
        for n in 0..=idx_max {
            if table[n as usize].mod_floor(&modulus) != Nat::from(n).mod_floor(&modulus) {
                return AlphaProps::CongruenceFailed { b, n };
            }
        }
    }
    AlphaProps::Ok
}
