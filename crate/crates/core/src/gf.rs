//! Exact arithmetic in GF(p^e).
//!
//! Elements are coefficient vectors over GF(p) modulo a fixed monic
//! irreducible polynomial. Each element is stored by its *index*: the
//! coefficient vector read as a base-p integer (coefficient of x^i is the
//! i-th base-p digit). The index is the canonical element order used by
//! every downstream module.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default upper bound on the field order accepted by [`Field::new`].
pub const DEFAULT_ORDER_BOUND: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field exponent must be at least 1")]
    ZeroExponent,
    #[error("field order {p}^{e} exceeds the bound {bound}")]
    TooLarge { p: u32, e: u32, bound: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus {0:?} is not monic irreducible of the requested degree")]
    BadModulus(Vec<u32>),
    #[error("element index {0} is out of range")]
    OutOfRange(u32),
}

/// Parameters of a finite field: characteristic, degree and modulus.
///
/// `modulus` lists the coefficients low degree first and includes the
/// leading 1, so it has length `e + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> u32 {
        self.p.pow(self.e)
    }
}

/// An element of GF(p^e), identified by its base-p index.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^e` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p as u32, e))
}

/// Finite field with log/antilog tables for multiplication.
#[derive(Clone, Debug)]
pub struct Field {
    spec: FieldSpec,
    q: u32,
    /// `exp[i] = g^i` for a fixed primitive element `g`, doubled in length.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Field {
    /// GF(p^e) with the lexicographically smallest monic irreducible modulus.
    pub fn new(p: u32, e: u32) -> Result<Field, GfError> {
        Self::with_bound(p, e, DEFAULT_ORDER_BOUND)
    }

    pub fn with_bound(p: u32, e: u32, bound: u64) -> Result<Field, GfError> {
        check_params(p, e, bound)?;
        let modulus = smallest_irreducible(p, e);
        Ok(Self::build(FieldSpec { p, e, modulus }))
    }

    /// GF(q) for a prime power `q`.
    pub fn of_order(q: u64) -> Result<Field, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, e)
    }

    /// Field with an explicitly chosen modulus (for cross-checking against
    /// other conventions, e.g. Conway polynomials).
    pub fn with_modulus(p: u32, e: u32, modulus: Vec<u32>) -> Result<Field, GfError> {
        check_params(p, e, DEFAULT_ORDER_BOUND)?;
        if modulus.len() != e as usize + 1
            || modulus[e as usize] != 1
            || modulus.iter().any(|&c| c >= p)
            || !is_irreducible(&modulus, p)
        {
            return Err(GfError::BadModulus(modulus));
        }
        Ok(Self::build(FieldSpec { p, e, modulus }))
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Field, GfError> {
        Self::with_modulus(spec.p, spec.e, spec.modulus.clone())
    }

    fn build(spec: FieldSpec) -> Field {
        let q = spec.order();
        let n = (q - 1) as usize;
        let mul = |a: u32, b: u32| {
            let r = poly_mulmod(&digits(a, spec.p, spec.e), &digits(b, spec.p, spec.e), &spec.modulus, spec.p);
            undigits(&r, spec.p)
        };
        let generator = (1..q)
            .find(|&g| {
                let mut x = g;
                for k in 1..=n {
                    if x == 1 {
                        return k == n;
                    }
                    x = mul(x, g);
                }
                false
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(2 * n);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..n {
            exp.push(x);
            log[x as usize] = i as u32;
            x = mul(x, generator);
        }
        exp.extend_from_within(..);
        Field { spec, q, exp, log }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.e
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, GfError> {
        if index < self.q {
            Ok(FieldElement(index))
        } else {
            Err(GfError::OutOfRange(index))
        }
    }

    /// All elements in canonical (index) order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    /// Image of the integer `n` in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.spec.p as i64) as u32)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        digits(a.0, self.spec.p, self.spec.e)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, GfError> {
        let p = self.spec.p;
        if coeffs.len() != self.spec.e as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(GfError::BadModulus(coeffs.to_vec()));
        }
        Ok(FieldElement(undigits(coeffs, p)))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = self.spec.p;
        if p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let (mut out, mut place) = (0, 1);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let p = self.spec.p;
        if p == 2 {
            return a;
        }
        let mut x = a.0;
        let (mut out, mut place) = (0, 1);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        FieldElement(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        let n = self.q - 1;
        Ok(FieldElement(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, n: u64) -> FieldElement {
        if n == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let m = (self.q - 1) as u64;
        let l = (self.log[a.0 as usize] as u64 * (n % m)) % m;
        FieldElement(self.exp[l as usize])
    }

    /// `a^(p^k)`. Panics unless `k < e`.
    pub fn frobenius(&self, a: FieldElement, k: u32) -> FieldElement {
        assert!(k < self.spec.e, "frobenius power {k} out of range");
        (0..k).fold(a, |x, _| self.pow(x, self.spec.p as u64))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FieldElement) -> Option<u32> {
        if a.0 == 0 {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(n / gcd(n, l))
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_params(p: u32, e: u32, bound: u64) -> Result<(), GfError> {
    if !is_prime(p as u64) {
        return Err(GfError::NotPrime(p));
    }
    if e < 1 {
        return Err(GfError::ZeroExponent);
    }
    let q = (p as u64).checked_pow(e);
    match q {
        Some(q) if q <= bound => Ok(()),
        _ => Err(GfError::TooLarge { p, e, bound }),
    }
}

fn digits(mut x: u32, p: u32, len: u32) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn undigits(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn trim(mut f: Vec<u32>) -> Vec<u32> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = (lead * c) % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    let mut r = poly_rem(&prod, m, p);
    r.resize(m.len() - 1, 0);
    r
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most half the degree of `f`.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        for n in 0..p.pow(d as u32) {
            let mut g = digits(n, p, d as u32);
            g.push(1);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `e` over GF(p), comparing
/// coefficient lists from the constant term upwards.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    (0..p.pow(e))
        .map(|n| {
            let mut f: Vec<u32> = digits(n, p, e).into_iter().rev().collect();
            f.push(1);
            f
        })
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_irreducibles(p: u32, deg: u32) -> Vec<Vec<u32>> {
        // Every reducible monic polynomial of degree `deg` is a product of two
        // monic polynomials of positive degree; multiply them all out.
        let monic = |d: u32| -> Vec<Vec<u32>> {
            (0..p.pow(d))
                .map(|n| {
                    let mut c = digits(n, p, d);
                    c.push(1);
                    c
                })
                .collect()
        };
        let mut reducible = std::collections::HashSet::new();
        for d in 1..deg {
            for a in monic(d) {
                for b in monic(deg - d) {
                    let mut prod = vec![0u32; (deg + 1) as usize];
                    for (i, &x) in a.iter().enumerate() {
                        for (j, &y) in b.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    reducible.insert(prod);
                }
            }
        }
        monic(deg).into_iter().filter(|f| !reducible.contains(f)).collect()
    }

    #[test]
    fn modulus_for_small_fields() {
        assert_eq!(Field::new(2, 1).unwrap().spec().modulus, vec![0, 1]);
        assert_eq!(Field::new(2, 2).unwrap().spec().modulus, vec![1, 1, 1]);
        let mut irr = brute_force_irreducibles(3, 2);
        irr.sort();
        let smallest = irr.first().unwrap().clone();
        assert_eq!(smallest, vec![1, 0, 1]);
        assert_eq!(Field::new(3, 2).unwrap().spec().modulus, smallest);
    }

    #[test]
    fn irreducibility_matches_brute_force() {
        for (p, d) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)] {
            let expected = brute_force_irreducibles(p, d);
            for n in 0..p.pow(d) {
                let mut f = digits(n, p, d);
                f.push(1);
                assert_eq!(is_irreducible(&f, p), expected.contains(&f), "{f:?} over GF({p})");
            }
        }
    }

    #[test]
    fn gf4_arithmetic() {
        let f = Field::new(2, 2).unwrap();
        let x = f.from_coeffs(&[0, 1]).unwrap();
        let x_plus_1 = f.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f.mul(x, x), x_plus_1);
        assert_eq!(f.frobenius(x, 1), x_plus_1);
        assert_eq!(f.frobenius(x, 0), x);
    }

    #[test]
    fn parameter_errors() {
        assert_eq!(Field::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(Field::new(2, 0).unwrap_err(), GfError::ZeroExponent);
        assert!(matches!(Field::new(2, 17), Err(GfError::TooLarge { .. })));
        assert!(matches!(Field::with_bound(3, 3, 20), Err(GfError::TooLarge { .. })));
        assert!(matches!(Field::with_modulus(2, 2, vec![1, 0, 1]), Err(GfError::BadModulus(_))));
        assert_eq!(Field::new(3, 1).unwrap().inv(FieldElement::ZERO), Err(GfError::ZeroInverse));
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn frobenius_has_order_e() {
        for (p, e) in [(2, 3), (3, 2), (2, 4)] {
            let f = Field::new(p, e).unwrap();
            for a in f.elements() {
                for k in 1..e {
                    let mut x = f.frobenius(a, k);
                    let mut steps = 1;
                    while steps * k % e != 0 {
                        x = f.frobenius(x, k);
                        steps += 1;
                    }
                    assert_eq!(x, a);
                }
            }
        }
    }

    #[test]
    fn alternative_modulus_gives_isomorphic_field() {
        // x^2 + 2x + 2 is also irreducible over GF(3).
        let f = Field::with_modulus(3, 2, vec![2, 2, 1]).unwrap();
        let generators = f.elements().filter(|&a| f.mult_order(a) == Some(8)).count();
        assert_eq!(generators, 4);
    }
}
