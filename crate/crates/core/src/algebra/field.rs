//! Finite fields GF(p^m) with explicit, fixed modulus polynomials.
//!
//! Elements are coefficient vectors over GF(p), little-endian (index i is
//! the coefficient of x^i). Every spec pins a concrete modulus so that
//! element encodings, enumeration orders, and derived permutations are
//! bit-identical across runs and machines.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// A finite field GF(p^m) together with its modulus polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    p: u32,
    m: usize,
    /// Monic irreducible of degree m, little-endian, length m+1.
    /// For m = 1 this is x itself, so arithmetic degenerates to mod-p.
    modulus: Vec<u32>,
}

/// An element of some [`FieldSpec`]; meaningful only relative to the spec
/// it was created by (operations validate the coefficient length).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElem {
    coeffs: Vec<u32>,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElem({})", self.digit_string())
    }
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Little-endian digit string: "011" is x + x². Requires p ≤ 10.
    pub fn digit_string(&self) -> String {
        self.coeffs.iter().map(|&c| char::from_digit(c, 10).unwrap_or('?')).collect()
    }
}

/// Fixed modulus table. All entries are primitive polynomials (x generates
/// the multiplicative group), which the k-cycle machinery relies on; the
/// inline tests re-verify both irreducibility and primitivity.
const MODULUS_TABLE: &[(u32, usize, &[u32])] = &[
    (2, 2, &[1, 1, 1]),          // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]),       // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0, 1]),    // x^4 + x + 1
    (2, 5, &[1, 0, 1, 0, 0, 1]), // x^5 + x^2 + 1
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]), // x^6 + x + 1
    (3, 2, &[2, 2, 1]),          // x^2 + 2x + 2
    (3, 3, &[1, 2, 0, 1]),       // x^3 + 2x + 1
    (5, 2, &[2, 4, 1]),          // x^2 + 4x + 2
    (5, 3, &[3, 3, 0, 1]),       // x^3 + 3x + 3
    (7, 2, &[3, 6, 1]),          // x^2 + 6x + 3
];

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn factorize(mut n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            primes.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
}

// --- dense polynomial helpers over GF(p), little-endian ---

fn poly_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai as u64 * bj as u64;
        }
    }
    let mut out: Vec<u32> = out.into_iter().map(|c| (c % p as u64) as u32).collect();
    poly_trim(&mut out);
    out
}

/// Remainder of a by b (b nonzero). Coefficient arithmetic mod p.
fn poly_rem(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let mut bt = b.to_vec();
    poly_trim(&mut bt);
    assert!(!bt.is_empty(), "division by zero polynomial");
    let lead_inv = mod_inv(p, *bt.last().unwrap());
    while r.len() >= bt.len() {
        let shift = r.len() - bt.len();
        let factor = (*r.last().unwrap() as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bi) in bt.iter().enumerate() {
            let sub = factor as u64 * bi as u64 % p as u64;
            let idx = i + shift;
            r[idx] = ((r[idx] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn mod_inv(p: u32, a: u32) -> u32 {
    // Fermat: p is prime and a nonzero mod p.
    debug_assert!(a % p != 0);
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

fn poly_is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for enc in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut e = enc;
            for _ in 0..d {
                cand.push((e % p as u64) as u32);
                e /= p as u64;
            }
            cand.push(1); // monic
            if poly_rem(p, modulus, &cand).is_empty() {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Field with the shipped modulus for (p, m). m = 1 gives the prime
    /// field GF(p).
    pub fn new(p: u32, m: usize) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(LabError::Invalid(format!("characteristic {p} is not prime")));
        }
        if m == 0 {
            return Err(LabError::Invalid("extension degree must be at least 1".into()));
        }
        if m == 1 {
            return Ok(FieldSpec { p, m, modulus: vec![0, 1] });
        }
        for &(tp, tm, modulus) in MODULUS_TABLE {
            if tp == p && tm == m {
                return Ok(FieldSpec { p, m, modulus: modulus.to_vec() });
            }
        }
        Err(LabError::Invalid(format!(
            "no shipped modulus for GF({p}^{m}); provide one via with_modulus"
        )))
    }

    /// Field with a caller-chosen modulus (validated monic and irreducible).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(LabError::Invalid(format!("characteristic {p} is not prime")));
        }
        if modulus.len() < 2 {
            return Err(LabError::Invalid("modulus must have degree at least 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(LabError::Invalid("modulus coefficients must be reduced mod p".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(LabError::Invalid("modulus must be monic".into()));
        }
        if !poly_is_irreducible(p, &modulus) {
            return Err(LabError::Invalid(format!(
                "modulus {modulus:?} is reducible over GF({p})"
            )));
        }
        let m = modulus.len() - 1;
        Ok(FieldSpec { p, m, modulus })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Field size q = p^m.
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.m as u32)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.m] }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    /// Generator of the polynomial basis (the class of x). Only meaningful
    /// for m ≥ 2; for prime fields this is zero (x ≡ 0 mod x).
    pub fn x(&self) -> FieldElem {
        self.from_int(if self.m >= 2 { self.p as u64 } else { 0 })
    }

    /// Element from its little-endian base-p integer encoding
    /// (Σ cᵢ·p^i ↔ coefficient vector).
    pub fn from_int(&self, mut enc: u64) -> FieldElem {
        let mut coeffs = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            coeffs.push((enc % self.p as u64) as u32);
            enc /= self.p as u64;
        }
        FieldElem { coeffs }
    }

    /// Inverse of [`FieldSpec::from_int`].
    pub fn to_int(&self, a: &FieldElem) -> u64 {
        let mut enc = 0u64;
        for &c in a.coeffs.iter().rev() {
            enc = enc * self.p as u64 + c as u64;
        }
        enc
    }

    pub fn from_coeffs(&self, coeffs: Vec<u32>) -> Result<FieldElem> {
        if coeffs.len() != self.m {
            return Err(LabError::Invalid(format!(
                "coefficient vector length {} does not match extension degree {}",
                coeffs.len(),
                self.m
            )));
        }
        if coeffs.iter().any(|&c| c >= self.p) {
            return Err(LabError::Invalid("coefficients must be reduced mod p".into()));
        }
        Ok(FieldElem { coeffs })
    }

    /// Parses the little-endian digit string form emitted by
    /// [`FieldElem::digit_string`].
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem> {
        if self.p > 10 {
            return Err(LabError::Invalid(
                "digit-string element format requires characteristic below 10".into(),
            ));
        }
        let mut coeffs = Vec::with_capacity(self.m);
        for ch in s.chars() {
            let d = ch
                .to_digit(10)
                .ok_or_else(|| LabError::Invalid(format!("bad element digit {ch:?} in {s:?}")))?;
            coeffs.push(d);
        }
        self.from_coeffs(coeffs)
    }

    fn check(&self, a: &FieldElem) {
        assert_eq!(a.coeffs.len(), self.m, "element does not belong to this field");
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + y) % self.p)
            .collect();
        FieldElem { coeffs }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let coeffs = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect();
        FieldElem { coeffs }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.check(a);
        self.check(b);
        let prod = poly_mul(self.p, &a.coeffs, &b.coeffs);
        let mut rem = poly_rem(self.p, &prod, &self.modulus);
        rem.resize(self.m, 0);
        FieldElem { coeffs: rem }
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        self.check(a);
        if a.is_zero() {
            return Err(LabError::Invalid("inversion of zero field element".into()));
        }
        // a^(q-2) = a^{-1}; exponent fits easily at desk sizes.
        Ok(self.pow(a, self.q() - 2))
    }

    pub fn pow(&self, a: &FieldElem, mut exp: u64) -> FieldElem {
        self.check(a);
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Exact multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: &FieldElem) -> Result<u64> {
        self.check(a);
        if a.is_zero() {
            return Err(LabError::Invalid("zero has no multiplicative order".into()));
        }
        let group = self.q() - 1;
        let mut order = group;
        for r in factorize(group) {
            while order % r == 0 && self.pow(a, order / r) == self.one() {
                order /= r;
            }
        }
        Ok(order)
    }

    /// First element (in integer-encoding order) of multiplicative order
    /// q − 1. Deterministic; errors only for GF(2) where no generator of
    /// order ≥ 2 exists.
    pub fn primitive_element(&self) -> Result<FieldElem> {
        let q = self.q();
        if q < 3 {
            return Err(LabError::Invalid(
                "GF(2) has a trivial multiplicative group; no primitive element of order ≥ 2"
                    .into(),
            ));
        }
        for enc in 1..q {
            let cand = self.from_int(enc);
            if self.multiplicative_order(&cand)? == q - 1 {
                return Ok(cand);
            }
        }
        unreachable!("every finite field has a primitive element");
    }

    /// All q elements in integer-encoding order (0 first).
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.q()).map(|enc| self.from_int(enc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_modulus_arithmetic() {
        let f = FieldSpec::new(2, 3).unwrap();
        // x · x² = x³ = x + 1 under x³ + x + 1.
        let x = f.x();
        let x2 = f.mul(&x, &x);
        let expect = f.from_coeffs(vec![1, 1, 0]).unwrap();
        assert_eq!(f.mul(&x, &x2), expect);
    }

    #[test]
    fn gf8_every_nonzero_inverts() {
        let f = FieldSpec::new(2, 3).unwrap();
        for a in f.elements().skip(1) {
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
        assert!(f.inv(&f.zero()).is_err());
    }

    #[test]
    fn gf7_prime_field_addition() {
        let f = FieldSpec::new(7, 1).unwrap();
        let three = f.from_int(3);
        let five = f.from_int(5);
        assert_eq!(f.add(&three, &five), f.one());
    }

    #[test]
    fn gf7_primitive_element_is_three() {
        let f = FieldSpec::new(7, 1).unwrap();
        let g = f.primitive_element().unwrap();
        assert_eq!(f.to_int(&g), 3);
        assert_eq!(f.multiplicative_order(&g).unwrap(), 6);
    }

    #[test]
    fn gf4_nontrivial_elements_have_order_three() {
        let f = FieldSpec::new(2, 2).unwrap();
        for enc in [2u64, 3] {
            assert_eq!(f.multiplicative_order(&f.from_int(enc)).unwrap(), 3);
        }
        assert_eq!(f.multiplicative_order(&f.one()).unwrap(), 1);
    }

    #[test]
    fn distributivity_exhaustive_small_fields() {
        for (p, m) in [(2, 2), (2, 3), (2, 4), (3, 2), (13, 1)] {
            let f = FieldSpec::new(p, m).unwrap();
            let elems: Vec<FieldElem> = f.elements().collect();
            for a in &elems {
                for b in &elems {
                    for c in &elems {
                        let lhs = f.mul(a, &f.add(b, c));
                        let rhs = f.add(&f.mul(a, b), &f.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn shipped_moduli_are_irreducible_and_primitive() {
        for &(p, m, modulus) in MODULUS_TABLE {
            assert!(poly_is_irreducible(p, modulus), "GF({p}^{m}) modulus reducible");
            let f = FieldSpec::new(p, m).unwrap();
            assert_eq!(
                f.multiplicative_order(&f.x()).unwrap(),
                f.q() - 1,
                "x is not primitive for GF({p}^{m})"
            );
        }
    }

    #[test]
    fn reducible_or_malformed_moduli_rejected() {
        // x² + 1 = (x+1)² over GF(2).
        assert!(FieldSpec::with_modulus(2, vec![1, 0, 1]).is_err());
        // Non-monic.
        assert!(FieldSpec::with_modulus(3, vec![1, 1, 2]).is_err());
        // Composite characteristic.
        assert!(FieldSpec::new(6, 1).is_err());
        // Accepted custom modulus: x² + x + 1 over GF(2).
        let f = FieldSpec::with_modulus(2, vec![1, 1, 1]).unwrap();
        assert_eq!(f.q(), 4);
    }

    #[test]
    fn integer_encoding_round_trips() {
        let f = FieldSpec::new(3, 3).unwrap();
        for enc in 0..f.q() {
            assert_eq!(f.to_int(&f.from_int(enc)), enc);
        }
    }

    #[test]
    fn digit_string_round_trips() {
        let f = FieldSpec::new(2, 3).unwrap();
        let a = f.from_coeffs(vec![0, 1, 1]).unwrap(); // x + x²
        assert_eq!(a.digit_string(), "011");
        assert_eq!(f.parse_elem("011").unwrap(), a);
        assert!(f.parse_elem("012").is_err()); // digit ≥ p
        assert!(f.parse_elem("01").is_err()); // wrong length
    }

    #[test]
    fn order_of_x_in_gf9_is_eight() {
        let f = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f.multiplicative_order(&f.x()).unwrap(), 8);
    }
}
