//! Elementary number theory: Euclidean division, prime streams, binomial
//! coefficients (with Lucas' theorem), base-q digits and the four squares
//! theorem with its Euler combination step.

use crate::{nat, Int, Nat};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::sync::Mutex;

/// Euclidean division: returns `(q, r)` with `a = q*b + r` and `r < b`.
///
/// Panics if `b` is zero.
pub fn euclid_div(a: &Nat, b: &Nat) -> (Nat, Nat) {
    assert!(!b.is_zero(), "euclid_div: division by zero");
    a.div_rem(b)
}

/// Trial-division primality test; adequate for the small primes the
/// compilers need.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());

/// The `i`-th prime, zero based: `nth_prime(0) = 2`, `nth_prime(1) = 3`, ...
/// Memoized across calls.
pub fn nth_prime(i: usize) -> u64 {
    let mut cache = PRIMES.lock().unwrap();
    if cache.is_empty() {
        cache.push(2);
    }
    while cache.len() <= i {
        let mut c = cache.last().unwrap() + 1;
        while !is_prime(c) {
            c += 1;
        }
        cache.push(c);
    }
    cache[i]
}

/// State prime stream: the `i`-th state prime is the `2i`-th prime.
/// Interleaving state and register primes keeps the two streams disjoint.
pub fn state_prime(i: usize) -> u64 {
    nth_prime(2 * i)
}

/// Register prime stream: the `i`-th register prime is the `2i+1`-th prime.
pub fn reg_prime(i: usize) -> u64 {
    nth_prime(2 * i + 1)
}

/// Binomial coefficient through the Pascal recurrence
/// `C(m,0) = 1`, `C(0,1+n) = 0`, `C(1+m,1+n) = C(m,n) + C(m,1+n)`,
/// computed row by row.
pub fn binomial(m: &Nat, n: &Nat) -> Nat {
    if n > m {
        return Nat::zero();
    }
    let m64 = m
        .to_u64()
        .expect("binomial: row index too large for the Pascal table");
    let n64 = n.to_u64().unwrap();
    // Row i of the table restricted to columns 0..=n64.
    let cols = (n64 + 1) as usize;
    let mut row: Vec<Nat> = vec![Nat::zero(); cols];
    row[0] = Nat::one();
    for _ in 0..m64 {
        for j in (1..cols).rev() {
            let (lo, hi) = row.split_at_mut(j);
            hi[0] += &lo[j - 1];
        }
    }
    row[cols - 1].clone()
}

/// `C(m,n) mod p` for prime `p` by Lucas' theorem: the product of the
/// binomials of the base-`p` digits.
pub fn lucas_binomial_mod(m: &Nat, n: &Nat, p: u64) -> u64 {
    assert!(is_prime(p), "lucas_binomial_mod: modulus must be prime");
    let pn = nat(p);
    let mut m = m.clone();
    let mut n = n.clone();
    let mut acc = 1u64;
    while !m.is_zero() || !n.is_zero() {
        let (mq, mr) = m.div_rem(&pn);
        let (nq, nr) = n.div_rem(&pn);
        if nr > mr {
            return 0;
        }
        let c = binomial(&mr, &nr).mod_floor(&pn).to_u64().unwrap();
        acc = (acc * c) % p;
        m = mq;
        n = nq;
    }
    acc
}

/// Digitwise order: `a` is masked below `b` when every base-2 digit of `a`
/// is at most the corresponding digit of `b`; by Lucas' theorem this is
/// exactly `C(b,a)` being odd.
pub fn masked_le(a: &Nat, b: &Nat) -> bool {
    lucas_binomial_mod(b, a, 2) == 1
}

/// Little-endian base-`q` digits of `n` (empty for `n = 0`).  Requires
/// `q >= 2`.
pub fn base_digits(n: &Nat, q: &Nat) -> Vec<Nat> {
    assert!(*q >= nat(2), "base_digits: base must be at least 2");
    let mut digits = Vec::new();
    let mut n = n.clone();
    while !n.is_zero() {
        let (d, r) = n.div_rem(q);
        digits.push(r);
        n = d;
    }
    digits
}

/// Rebuild a number from little-endian base-`q` digits.
pub fn from_digits(digits: &[Nat], q: &Nat) -> Nat {
    let mut acc = Nat::zero();
    for d in digits.iter().rev() {
        acc = acc * q + d;
    }
    acc
}

/// Euler's four square identity: combines representations of two factors
/// into a representation of their product.  Works over the integers; the
/// output satisfies
/// `(a1^2+b1^2+c1^2+d1^2) * (a2^2+b2^2+c2^2+d2^2) = a^2+b^2+c^2+d^2`.
pub fn euler_combine(x: &(Int, Int, Int, Int), y: &(Int, Int, Int, Int)) -> (Int, Int, Int, Int) {
    let (a1, b1, c1, d1) = x;
    let (a2, b2, c2, d2) = y;
    let a = a1 * a2 + b1 * b2 + c1 * c2 + d1 * d2;
    let b = a1 * b2 - b1 * a2 + d1 * c2 - c1 * d2;
    let c = a1 * c2 - c1 * a2 + b1 * d2 - d1 * b2;
    let d = a1 * d2 - d1 * a2 + c1 * b2 - b1 * c2;
    (a, b, c, d)
}

/// Factor classification for the recursion of [`four_squares`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factorisation {
    /// `n < 2`.
    Small,
    /// `n` itself is prime.
    Prime,
    /// `n = p * m` with `p` its smallest prime factor and `1 < m < n`.
    Composite(u64, u64),
}

/// Smallest-prime-factor decomposition of `n`.
pub fn prime_factor(n: u64) -> Factorisation {
    if n < 2 {
        return Factorisation::Small;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return Factorisation::Composite(d, n / d);
        }
        d += 1 + d % 2;
    }
    Factorisation::Prime
}

fn centered_residue(a: &Int, m: &Int) -> Int {
    // Representative of `a mod m` in the interval (-m/2, m/2].
    let mut r = a.mod_floor(m);
    if &(r.clone() * 2) > m {
        r -= m;
    }
    r
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Tonelli-Shanks square root modulo an odd prime; `n` must be a quadratic
/// residue.
fn sqrt_mod(n: u64, p: u64) -> u64 {
    let n = n % p;
    if n == 0 {
        return 0;
    }
    if p % 4 == 3 {
        return pow_mod(n, (p + 1) / 4, p);
    }
    // Write p-1 = q * 2^s with q odd.
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    // A quadratic non-residue.
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

/// Four squares of a prime `p`, by the classical descent.
fn four_squares_prime(p: u64) -> (Int, Int, Int, Int) {
    if p == 2 {
        return (Int::one(), Int::one(), Int::zero(), Int::zero());
    }
    // Find a, b with a^2 + b^2 + 1 divisible by p; centering both in
    // [0, p/2] keeps the initial multiplier strictly below p.
    let (mut a, mut b) = (0u64, 0u64);
    for x in 0..p {
        let need = (2 * p - 1 - mul_mod(x, x, p)) % p;
        if pow_mod(need, (p - 1) / 2, p) <= 1 {
            let y = sqrt_mod(need, p);
            a = x.min(p - x);
            b = y.min(p - y);
            break;
        }
    }
    let pz = Int::from(p);
    let mut t = (Int::from(a), Int::from(b), Int::one(), Int::zero());
    let mut m = (&t.0 * &t.0 + &t.1 * &t.1 + &t.2 * &t.2 + &t.3 * &t.3) / &pz;
    while !m.is_one() {
        let (ta, tb, tc, td) = t.clone();
        if m.is_even() {
            // Pair the components by parity and halve the multiplier.
            let mut v = [ta, tb, tc, td];
            v.sort_by_key(|x| x.is_odd());
            if v[1].is_odd() != v[0].is_odd() {
                v.swap(1, 2);
            }
            let two = Int::from(2);
            t = (
                (&v[0] + &v[1]) / &two,
                (v[0].clone() - &v[1]) / &two,
                (&v[2] + &v[3]) / &two,
                (v[2].clone() - &v[3]) / &two,
            );
            m /= two;
        } else {
            let w = centered_residue(&ta, &m);
            let x = centered_residue(&tb, &m);
            let y = centered_residue(&tc, &m);
            let z = centered_residue(&td, &m);
            let r = (&w * &w + &x * &x + &y * &y + &z * &z) / &m;
            debug_assert!(!r.is_zero() && r < m);
            let comb = euler_combine(&(ta, tb, tc, td), &(w, x, y, z));
            t = (&comb.0 / &m, &comb.1 / &m, &comb.2 / &m, &comb.3 / &m);
            m = r;
        }
        debug_assert_eq!(&t.0 * &t.0 + &t.1 * &t.1 + &t.2 * &t.2 + &t.3 * &t.3, &m * &pz);
    }
    t
}

/// Lagrange's four square theorem, constructively: returns `(a,b,c,d)` with
/// `n = a^2 + b^2 + c^2 + d^2`.
pub fn four_squares(n: u64) -> (Nat, Nat, Nat, Nat) {
    fn go(n: u64) -> (Int, Int, Int, Int) {
        match prime_factor(n) {
            Factorisation::Small => (Int::from(n), Int::zero(), Int::zero(), Int::zero()),
            Factorisation::Prime => four_squares_prime(n),
            Factorisation::Composite(p, m) => euler_combine(&go(p), &go(m)),
        }
    }
    let (a, b, c, d) = go(n);
    let f = |x: Int| x.abs().to_biguint().unwrap();
    (f(a), f(b), f(c), f(d))
}
