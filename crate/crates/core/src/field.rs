//! Arithmetic in GF(p^e) for small prime powers.
//!
//! Elements are stored in coefficient form: the base-p digits of
//! [`FieldElement::rep`] are the coefficients of a polynomial in the
//! primitive element α, lowest degree first. Multiplication goes through
//! log/antilog tables; addition goes through a full q×q table.
//!
//! External labels follow the log convention `0 ↦ 0`, `m ↦ α^(m-1)`, so
//! for GF(16) with α⁴ + α³ + 1 = 0 the label 5 denotes α⁴ = α³ + 1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order. All tables are q×q.
pub const MAX_ORDER: u32 = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(u64),
    #[error("polynomial {poly} is not a monic degree-{e} polynomial over GF({p})")]
    BadPolynomial { p: u32, e: u32, poly: u64 },
    #[error("polynomial {0} is not primitive")]
    NotPrimitive(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("label {label} out of range for GF({q})")]
    LabelOutOfRange { label: u32, q: u32 },
    #[error("no field of order {0}")]
    NotPrimePower(u32),
}

/// A field element in coefficient representation, `0 <= rep < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn rep(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// GF(p^e) with precomputed tables. Immutable after construction.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    poly: u64,
    /// `antilog[i] = α^i`, length q-1.
    antilog: Vec<u16>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u16>,
    add: Vec<u16>,
    neg: Vec<u16>,
}

impl std::fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("poly", &self.poly)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.poly == other.poly
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u32) -> bool {
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

/// Splits `q` into `(p, e)` with `q = p^e`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn digits(mut x: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = (x % p as u64) as u32;
        x /= p as u64;
    }
    out
}

fn undigits(ds: &[u32], p: u32) -> u16 {
    ds.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u16
}

impl FieldSpec {
    /// Builds GF(p^e) from a monic degree-`e` polynomial whose base-`p`
    /// digits (lowest degree first) are encoded in `poly`. The class of `x`
    /// must have multiplicative order `p^e - 1`.
    pub fn new(p: u32, e: u32, poly: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q64 = (p as u64).checked_pow(e).filter(|_| e >= 1);
        let q64 = q64.ok_or(FieldError::TooLarge(u64::MAX))?;
        if q64 > MAX_ORDER as u64 {
            return Err(FieldError::TooLarge(q64));
        }
        let q = q64 as u32;
        if poly < q64 || poly >= 2 * q64 {
            return Err(FieldError::BadPolynomial { p, e, poly });
        }
        let coeffs = digits(poly, p, e as usize + 1);
        debug_assert_eq!(coeffs[e as usize], 1);
        // x^e = -(c_{e-1} x^{e-1} + ... + c_0)
        let reduction: Vec<u32> = coeffs[..e as usize].iter().map(|&c| (p - c) % p).collect();

        let n = (q - 1) as usize;
        let mut antilog = Vec::with_capacity(n);
        let mut log = vec![0u16; q as usize];
        let mut seen = vec![false; q as usize];
        // current power of α as digit vector
        let mut cur = vec![0u32; e as usize];
        cur[0] = 1;
        for i in 0..n {
            let rep = undigits(&cur, p);
            if rep == 0 || seen[rep as usize] {
                return Err(FieldError::NotPrimitive(poly));
            }
            seen[rep as usize] = true;
            antilog.push(rep);
            log[rep as usize] = i as u16;
            // multiply by x
            let top = cur[e as usize - 1];
            for k in (1..e as usize).rev() {
                cur[k] = cur[k - 1];
            }
            cur[0] = 0;
            for k in 0..e as usize {
                cur[k] = (cur[k] + top * reduction[k]) % p;
            }
        }
        if undigits(&cur, p) != 1 {
            return Err(FieldError::NotPrimitive(poly));
        }

        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut neg = vec![0u16; qs];
        for a in 0..qs {
            let da = digits(a as u64, p, e as usize);
            let dn: Vec<u32> = da.iter().map(|&d| (p - d) % p).collect();
            neg[a] = undigits(&dn, p);
            for b in 0..qs {
                let db = digits(b as u64, p, e as usize);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * qs + b] = undigits(&s, p);
            }
        }
        Ok(FieldSpec {
            p,
            e,
            q,
            poly,
            antilog,
            log,
            add,
            neg,
        })
    }

    /// GF(16) with α⁴ + α³ + 1 = 0, the labeling used for the bundled witness.
    pub fn gf16_paper() -> Self {
        Self::new(2, 4, 0b11001).expect("x^4+x^3+1 is primitive")
    }

    /// GF(q) with the numerically smallest primitive polynomial.
    pub fn with_order(q: u32) -> Result<Self, FieldError> {
        let (p, e) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge(q as u64));
        }
        let q = q as u64;
        (q..2 * q)
            .find_map(|poly| Self::new(p, e, poly).ok())
            .ok_or(FieldError::NotPrimitive(q))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn poly(&self) -> u64 {
        self.poly
    }

    #[inline]
    pub fn element(&self, rep: u32) -> Option<FieldElement> {
        (rep < self.q).then_some(FieldElement(rep as u16))
    }

    /// All elements in coefficient order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u16).map(FieldElement)
    }

    /// α^i for any integer exponent.
    #[inline]
    pub fn alpha_pow(&self, i: i64) -> FieldElement {
        let n = (self.q - 1) as i64;
        FieldElement(self.antilog[i.rem_euclid(n) as usize])
    }

    /// Discrete log base α; `None` for zero.
    #[inline]
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize] as u32)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.is_zero() || b.is_zero() {
            return FieldElement::ZERO;
        }
        let n = self.q as usize - 1;
        let s = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        FieldElement(self.antilog[if s >= n { s - n } else { s }])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.q as usize - 1;
        let l = self.log[a.0 as usize] as usize;
        Ok(FieldElement(self.antilog[(n - l) % n]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.antilog[((l * (k % n)) % n) as usize])
    }

    /// The automorphism `a ↦ a^(p^i)`; `i` is taken mod `e`.
    #[inline]
    pub fn frobenius(&self, a: FieldElement, i: u32) -> FieldElement {
        if a.is_zero() || i % self.e == 0 {
            return a;
        }
        let n = (self.q - 1) as u64;
        let k = (self.p as u64).pow(i % self.e) % n;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.antilog[((l * k) % n) as usize])
    }

    /// Log-style label: `0 ↦ 0`, `α^k ↦ k + 1`.
    #[inline]
    pub fn label_encode(&self, a: FieldElement) -> u32 {
        if a.is_zero() {
            0
        } else {
            self.log[a.0 as usize] as u32 + 1
        }
    }

    pub fn label_decode(&self, m: u32) -> Result<FieldElement, FieldError> {
        match m {
            0 => Ok(FieldElement::ZERO),
            m if m < self.q => Ok(FieldElement(self.antilog[(m - 1) as usize])),
            m => Err(FieldError::LabelOutOfRange { label: m, q: self.q }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf16() -> FieldSpec {
        FieldSpec::gf16_paper()
    }

    fn l(f: &FieldSpec, m: u32) -> FieldElement {
        f.label_decode(m).unwrap()
    }

    #[test]
    fn gf16_defining_relation() {
        let f = gf16();
        assert_eq!(f.q(), 16);
        // α⁴ = α³ + 1 has coefficient rep 1001b
        assert_eq!(f.alpha_pow(4), FieldElement(0b1001));
        assert_eq!(f.alpha_pow(15), FieldElement::ONE);
    }

    #[test]
    fn gf16_table_examples() {
        let f = gf16();
        assert_eq!(f.label_encode(f.add(f.alpha_pow(3), FieldElement::ONE)), 5);
        assert_eq!(f.label_encode(f.mul(f.alpha_pow(1), f.alpha_pow(4))), 6);
        assert_eq!(f.label_encode(f.inv(f.alpha_pow(1)).unwrap()), 15);
        assert_eq!(f.label_encode(f.frobenius(f.alpha_pow(1), 1)), 3);
    }

    #[test]
    fn label_codec() {
        let f = gf16();
        assert_eq!(l(&f, 1), FieldElement::ONE);
        assert_eq!(l(&f, 0), FieldElement::ZERO);
        assert_eq!(l(&f, 5).rep(), 0b1001);
        assert_eq!(
            f.label_decode(16),
            Err(FieldError::LabelOutOfRange { label: 16, q: 16 })
        );
        for m in 0..16 {
            assert_eq!(f.label_encode(l(&f, m)), m);
        }
    }

    #[test]
    fn reducible_poly_rejected() {
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2
        assert_eq!(FieldSpec::new(2, 4, 0b10101), Err(FieldError::NotPrimitive(0b10101)));
        // irreducible but not primitive: x^4 + x^3 + x^2 + x + 1 has order 5
        assert_eq!(FieldSpec::new(2, 4, 0b11111), Err(FieldError::NotPrimitive(0b11111)));
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(FieldSpec::new(4, 1, 5), Err(FieldError::NotPrime(4)));
        assert!(matches!(FieldSpec::new(2, 4, 7), Err(FieldError::BadPolynomial { .. })));
        assert!(matches!(FieldSpec::new(2, 8, 1 << 8 | 1), Err(FieldError::TooLarge(256))));
        assert_eq!(gf16().inv(FieldElement::ZERO), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn prime_fields() {
        let f2 = FieldSpec::new(2, 1, 0b11).unwrap();
        assert_eq!(f2.q(), 2);
        assert_eq!(f2.add(FieldElement::ONE, FieldElement::ONE), FieldElement::ZERO);
        // x + 3 over GF(5): α = -3 = 2, a generator
        let f5 = FieldSpec::new(5, 1, 5 + 3).unwrap();
        assert_eq!(f5.alpha_pow(1), FieldElement(2));
        // x + 1 over GF(5): α = 4 has order 2
        assert!(FieldSpec::new(5, 1, 5 + 1).is_err());
    }

    #[test]
    fn with_order_small_fields() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32] {
            let f = FieldSpec::with_order(q).unwrap();
            assert_eq!(f.q(), q);
        }
        assert_eq!(FieldSpec::with_order(6).unwrap_err(), FieldError::NotPrimePower(6));
    }

    #[test]
    fn fermat_and_frobenius_identity() {
        for q in [4, 8, 9, 16, 25, 27, 32] {
            let f = FieldSpec::with_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, q as u64), a);
                if !a.is_zero() {
                    assert_eq!(f.pow(a, q as u64 - 1), FieldElement::ONE);
                }
                assert_eq!(f.frobenius(a, f.e()), a);
                assert_eq!(f.frobenius(a, 1), f.pow(a, f.p() as u64));
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field() -> impl Strategy<Value = FieldSpec> {
            prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32])
                .prop_map(|q| FieldSpec::with_order(q).unwrap())
        }

        proptest! {
            #[test]
            fn field_axioms(f in field(), a in 0u32..256, b in 0u32..256, c in 0u32..256) {
                let q = f.q();
                let (a, b, c) = (FieldElement((a % q) as u16), FieldElement((b % q) as u16), FieldElement((c % q) as u16));
                prop_assert_eq!(f.add(a, b), f.add(b, a));
                prop_assert_eq!(f.mul(a, b), f.mul(b, a));
                prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                // Frobenius is a ring homomorphism
                prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
                prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
            }

            #[test]
            fn log_tables_agree(f in field(), a in 1u32..256, b in 1u32..256) {
                let q = f.q();
                let a = FieldElement((a % (q - 1) + 1) as u16);
                let b = FieldElement((b % (q - 1) + 1) as u16);
                let s = f.log(a).unwrap() as i64 + f.log(b).unwrap() as i64;
                prop_assert_eq!(f.mul(a, b), f.alpha_pow(s));
            }
        }
    }
}
