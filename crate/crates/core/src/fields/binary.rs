use std::fmt;

use super::Field;
use crate::error::{Error, Result};

/// GF(2^n) as GF(2)[x] modulo a monic irreducible polynomial of degree `n`.
///
/// `poly` holds all `n + 1` coefficients, bit `j` being the coefficient of
/// `x^j`; bit `n` is always set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryField {
    n: u32,
    poly: u32,
}

pub const MAX_BINARY_DEGREE: u32 = 16;

fn degree(a: u32) -> i32 {
    31 - a.leading_zeros() as i32
}

fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

fn is_irreducible(poly: u32) -> bool {
    let d = degree(poly);
    if d < 1 {
        return false;
    }
    // Every candidate divisor of degree 1..=d/2.
    for cand in 2u32..(1u32 << (d / 2 + 1)) {
        if degree(cand) >= 1 && poly_rem(poly, cand) == 0 {
            return false;
        }
    }
    true
}

impl BinaryField {
    /// Reduction polynomials used when none is given.
    pub fn default_polynomial(n: u32) -> Option<u32> {
        Some(match n {
            1 => 0b11,
            2 => 0b111,
            3 => 0b1011,
            4 => 0b10011,
            5 => 0b100101,
            6 => 0b1000011,
            7 => 0b10000011,
            8 => 0b100011101,
            _ => return None,
        })
    }

    pub fn new(n: u32, poly: u32) -> Result<Self> {
        if n == 0 || n > MAX_BINARY_DEGREE {
            return Err(Error::Usage(format!(
                "binary field degree must be in 1..={MAX_BINARY_DEGREE}, got {n}"
            )));
        }
        if degree(poly) != n as i32 {
            return Err(Error::Usage(format!(
                "reduction polynomial {} does not have degree {n}",
                format_polynomial(poly)
            )));
        }
        if !is_irreducible(poly) {
            return Err(Error::Usage(format!(
                "reduction polynomial {} is reducible over GF(2)",
                format_polynomial(poly)
            )));
        }
        Ok(BinaryField { n, poly })
    }

    pub fn with_default(n: u32) -> Result<Self> {
        let poly = Self::default_polynomial(n)
            .ok_or_else(|| Error::Usage(format!("no default reduction polynomial for n = {n}")))?;
        Self::new(n, poly)
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn polynomial(&self) -> u32 {
        self.poly
    }

    pub fn element(&self, bits: u32) -> Result<BinaryFieldElement> {
        if bits >= self.order() {
            return Err(Error::Usage(format!(
                "bit-vector {bits:#b} has degree >= {}",
                self.n
            )));
        }
        Ok(BinaryFieldElement { bits, field: *self })
    }

    /// Full `q x q` multiplication table, row-major.
    pub fn mul_table(&self) -> Vec<u32> {
        let q = self.order();
        let mut table = Vec::with_capacity((q * q) as usize);
        for a in 0..q {
            for b in 0..q {
                table.push(self.mul(a, b));
            }
        }
        table
    }
}

impl Field for BinaryField {
    fn order(&self) -> u32 {
        1 << self.n
    }

    fn characteristic(&self) -> u32 {
        2
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    fn neg(&self, a: u32) -> u32 {
        a
    }

    fn mul(&self, mut a: u32, mut b: u32) -> u32 {
        let top = 1u32 << self.n;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.poly;
            }
        }
        acc
    }

    fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::Domain(format!(
                "inverse of zero in GF(2^{})",
                self.n
            )));
        }
        // a^(2^n - 2)
        let mut exp = self.order() - 2;
        let mut base = a;
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        Ok(acc)
    }

    fn from_int(&self, n: i64) -> u32 {
        (n.rem_euclid(2)) as u32
    }
}

/// Renders e.g. `0b1011` as `x^3+x+1`.
pub fn format_polynomial(poly: u32) -> String {
    if poly == 0 {
        return "0".into();
    }
    let mut terms = Vec::new();
    for j in (0..32).rev() {
        if poly & (1 << j) != 0 {
            terms.push(match j {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{j}"),
            });
        }
    }
    terms.join("+")
}

/// Accepts `x^3+x+1`, `0b1011`, `0xb` or a plain binary coefficient string
/// such as `1011` (highest degree first).
pub fn parse_polynomial(text: &str) -> Result<u32> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Usage(format!("cannot parse polynomial `{text}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some(hex) = s.strip_prefix("0x") {
        return u32::from_str_radix(hex, 16).map_err(|_| bad());
    }
    if let Some(bin) = s.strip_prefix("0b") {
        return u32::from_str_radix(bin, 2).map_err(|_| bad());
    }
    if !s.contains('x') {
        return u32::from_str_radix(&s, 2).map_err(|_| bad());
    }
    let mut poly = 0u32;
    for term in s.split('+') {
        let exp = match term {
            "1" => 0,
            "x" => 1,
            t => t
                .strip_prefix("x^")
                .and_then(|e| e.parse::<u32>().ok())
                .filter(|&e| e < 32)
                .ok_or_else(bad)?,
        };
        poly ^= 1 << exp;
    }
    Ok(poly)
}

/// An element of GF(2^n) carrying its field description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BinaryFieldElement {
    bits: u32,
    field: BinaryField,
}

impl BinaryFieldElement {
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Usage("elements from different binary fields".into()));
        }
        Ok(())
    }

    fn wrap(&self, bits: u32) -> Self {
        BinaryFieldElement {
            bits,
            field: self.field,
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.bits ^ other.bits))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.bits, other.bits)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.bits)?))
    }
}

impl fmt::Display for BinaryFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_polynomial(self.bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Schoolbook carry-less product followed by long division.
    fn long_division_product(a: u32, b: u32, poly: u32) -> u32 {
        let mut prod = 0u32;
        for j in 0..16 {
            if b & (1 << j) != 0 {
                prod ^= a << j;
            }
        }
        poly_rem(prod, poly)
    }

    #[test]
    fn gf4_examples() {
        let f = BinaryField::new(2, 0b111).unwrap();
        let x = 0b10;
        assert_eq!(f.mul(x, x), 0b11);
        assert_eq!(long_division_product(x, x, 0b111), 0b11);
        assert_eq!(f.inv(x).unwrap(), 0b11);
        let brute: Vec<u32> = (1..4).filter(|&y| f.mul(x, y) == 1).collect();
        assert_eq!(brute, vec![0b11]);
        for a in f.elements() {
            assert_eq!(f.add(a, a), 0);
        }
    }

    #[test]
    fn multiplication_agrees_with_long_division() {
        for n in 1..=8 {
            let f = BinaryField::with_default(n).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), long_division_product(a, b, f.polynomial()));
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for n in 1..=4 {
            let f = BinaryField::with_default(n).unwrap();
            for a in f.elements() {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_nontrivial_beyond_prime_field() {
        for n in 2..=8 {
            let f = BinaryField::with_default(n).unwrap();
            assert!(f.elements().any(|a| f.mul(a, a) != a), "n = {n}");
        }
    }

    #[test]
    fn rejects_reducible_and_wrong_degree() {
        // x^2 + 1 = (x + 1)^2
        assert!(matches!(BinaryField::new(2, 0b101), Err(Error::Usage(_))));
        assert!(matches!(BinaryField::new(3, 0b111), Err(Error::Usage(_))));
        assert!(matches!(BinaryField::new(0, 0b1), Err(Error::Usage(_))));
        assert!(BinaryField::new(3, 0b1101).is_ok());
    }

    #[test]
    fn inverse_of_zero_is_domain_error() {
        let f = BinaryField::with_default(3).unwrap();
        assert!(matches!(f.inv(0), Err(Error::Domain(_))));
        assert!(matches!(f.element(0).unwrap().inv(), Err(Error::Domain(_))));
    }

    #[test]
    fn polynomial_text_round_trip() {
        assert_eq!(parse_polynomial("x^2+x+1").unwrap(), 0b111);
        assert_eq!(parse_polynomial("x^4 + x + 1").unwrap(), 0b10011);
        assert_eq!(parse_polynomial("0x13").unwrap(), 0b10011);
        assert_eq!(parse_polynomial("0b1011").unwrap(), 0b1011);
        assert_eq!(parse_polynomial("1011").unwrap(), 0b1011);
        assert!(parse_polynomial("y^2").is_err());
        for n in 1..=8 {
            let p = BinaryField::default_polynomial(n).unwrap();
            assert_eq!(parse_polynomial(&format_polynomial(p)).unwrap(), p);
        }
    }

    #[test]
    fn element_wrapper_ops() {
        let f = BinaryField::with_default(2).unwrap();
        let g = BinaryField::new(2, 0b111).unwrap();
        let a = f.element(0b10).unwrap();
        assert_eq!(a.try_add(&a).unwrap().bits(), 0);
        assert_eq!(a.try_mul(&a).unwrap().bits(), 0b11);
        assert_eq!(a.inv().unwrap().to_string(), "x+1");
        assert!(g.element(4).is_err());
        let other = BinaryField::with_default(3).unwrap().element(1).unwrap();
        assert!(a.try_add(&other).is_err());
    }
}
