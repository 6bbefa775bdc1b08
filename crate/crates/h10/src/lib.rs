//! A tower of computation models connected by verified-in-tests compilers.
//!
//! The chain goes from Minsky machines through FRACTRAN programs down to
//! Diophantine formulas, elementary constraint systems and finally a single
//! polynomial equation over the naturals (and, via four squares, over the
//! integers), then back up through mu-recursive algorithms to Minsky
//! machines again.  Every translation is executable and is exercised by a
//! bounded brute-force solver on small instances.

pub mod compilers;
pub mod dio;
pub mod json;
pub mod models;
pub mod murec_dio;
pub mod numtheory;
pub mod pell;
pub mod solver;

use num_bigint::{BigInt, BigUint};

/// Arbitrary precision natural number used throughout.
pub type Nat = BigUint;
/// Arbitrary precision integer.
pub type Int = BigInt;

/// Convenience constructor for `Nat` from a machine integer.
pub fn nat(n: u64) -> Nat {
    BigUint::from(n)
}

/// Convenience constructor for `Int` from a machine integer.
pub fn int(n: i64) -> Int {
    BigInt::from(n)
}
