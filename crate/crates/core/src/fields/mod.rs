//! Exact arithmetic in GF(p) for odd primes p and in GF(2^n).
//!
//! Elements are carried as `u32` values: the residue for prime fields and the
//! coefficient bit-vector (bit `j` is the coefficient of `x^j`) for binary
//! fields. The integer value doubles as the total order used for canonical
//! point orderings.

mod binary;
mod prime;

pub use binary::{format_polynomial, parse_polynomial, BinaryField, BinaryFieldElement};
pub use prime::{binomial_mod, PrimeField, PrimeFieldElement};

use std::fmt::Debug;

use crate::error::Result;

/// A finite field whose elements are encoded as integers `0..order`.
pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync {
    fn order(&self) -> u32;
    fn characteristic(&self) -> u32;

    fn add(&self, a: u32, b: u32) -> u32;
    fn neg(&self, a: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> Result<u32>;

    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Image of the integer `n` under the ring map `Z -> F`.
    fn from_int(&self, n: i64) -> u32;

    fn zero(&self) -> u32 {
        0
    }

    fn one(&self) -> u32 {
        1
    }

    /// All elements in increasing integer order.
    fn elements(&self) -> std::ops::Range<u32> {
        0..self.order()
    }
}
