use std::fmt;

use super::Field;
use crate::error::{Error, Result};

/// The prime field GF(p) for an odd prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Usage(format!("{p} is not prime")));
        }
        if p == 2 {
            return Err(Error::Usage("prime field modulus must be odd".into()));
        }
        // Products of two residues must fit in u64 with room to spare.
        if p > u32::MAX / 2 {
            return Err(Error::Usage(format!("modulus {p} too large")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn element(&self, value: i64) -> PrimeFieldElement {
        PrimeFieldElement {
            value: self.from_int(value),
            modulus: self.p,
        }
    }

    /// `binom(i, j)` reduced into the field.
    pub fn binomial(&self, i: u64, j: u64) -> u32 {
        binomial_mod(i, j, self.p)
    }
}

impl Field for PrimeField {
    fn order(&self) -> u32 {
        self.p
    }

    fn characteristic(&self) -> u32 {
        self.p
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    fn inv(&self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::Domain(format!("inverse of zero in GF({})", self.p)));
        }
        // Extended Euclid on (a, p).
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Ok(t0.rem_euclid(self.p as i64) as u32)
    }

    fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

/// `binom(i, j) mod p` by Lucas' theorem; exact for any `i`.
pub fn binomial_mod(mut i: u64, mut j: u64, p: u32) -> u32 {
    let p = p as u64;
    if j > i {
        return 0;
    }
    let mut acc = 1u64;
    while j > 0 || i > 0 {
        let (id, jd) = (i % p, j % p);
        if jd > id {
            return 0;
        }
        // Small binomial with digits below p, computed by multiplicative
        // formula in the field.
        let mut num = 1u64;
        let mut den = 1u64;
        for t in 0..jd {
            num = num * ((id - t) % p) % p;
            den = den * ((t + 1) % p) % p;
        }
        let field = PrimeField { p: p as u32 };
        let den_inv = field.inv(den as u32).expect("digit factorial is a unit") as u64;
        acc = acc * num % p * den_inv % p;
        i /= p;
        j /= p;
    }
    acc as u32
}

/// A residue together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeFieldElement {
    value: u32,
    modulus: u32,
}

impl PrimeFieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    fn field(&self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    fn same_field(&self, other: &Self) -> Result<PrimeField> {
        if self.modulus != other.modulus {
            return Err(Error::Usage(format!(
                "mixed moduli {} and {}",
                self.modulus, other.modulus
            )));
        }
        Ok(self.field())
    }

    fn wrap(&self, value: u32) -> Self {
        PrimeFieldElement {
            value,
            modulus: self.modulus,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(self.wrap(f.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(self.wrap(f.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let f = self.same_field(other)?;
        Ok(self.wrap(f.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> Self {
        self.wrap(self.field().neg(self.value))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field().inv(self.value)?))
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_binomial(i: u64, j: u64) -> u128 {
        if j > i {
            return 0;
        }
        let mut acc = 1u128;
        for t in 0..j {
            acc = acc * (i - t) as u128 / (t + 1) as u128;
        }
        acc
    }

    #[test]
    fn residue_examples() {
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(f3.add(2, 2), 1);
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(f5.inv(2).unwrap(), 3);
        assert_eq!(binomial_mod(4, 2, 3), 0);
        assert_eq!(exact_binomial(4, 2) % 3, 0);
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(matches!(PrimeField::new(4), Err(Error::Usage(_))));
        assert!(matches!(PrimeField::new(2), Err(Error::Usage(_))));
        assert!(matches!(PrimeField::new(1), Err(Error::Usage(_))));
    }

    #[test]
    fn inverse_of_zero_is_domain_error() {
        let f = PrimeField::new(7).unwrap();
        assert!(matches!(f.inv(0), Err(Error::Domain(_))));
        assert!(matches!(f.element(14).inv(), Err(Error::Domain(_))));
    }

    #[test]
    fn mixed_moduli_is_usage_error() {
        let a = PrimeField::new(3).unwrap().element(1);
        let b = PrimeField::new(5).unwrap().element(1);
        assert!(matches!(a.try_add(&b), Err(Error::Usage(_))));
        assert!(matches!(a.try_mul(&b), Err(Error::Usage(_))));
    }

    #[test]
    fn element_wrappers() {
        let f = PrimeField::new(5).unwrap();
        let a = f.element(3);
        let b = f.element(4);
        assert_eq!(a.try_add(&b).unwrap().value(), 2);
        assert_eq!(a.try_sub(&b).unwrap().value(), 4);
        assert_eq!(a.try_mul(&b).unwrap().value(), 2);
        assert_eq!(a.neg().value(), 2);
        assert_eq!(a.inv().unwrap().value(), 2);
        assert_eq!(f.element(-1).value(), 4);
    }

    #[test]
    fn binomials_match_integer_oracle_up_to_2p() {
        for p in [3u32, 5, 7, 11, 13] {
            for i in 0..=(2 * p as u64 + 3) {
                for j in 0..=i {
                    let expect = (exact_binomial(i, j) % p as u128) as u32;
                    assert_eq!(binomial_mod(i, j, p), expect, "C({i},{j}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for p in [3u32, 5, 7, 11, 13] {
            let f = PrimeField::new(p).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }
}
