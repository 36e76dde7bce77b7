//! Finite fields `F_{p^n}` with an explicit polynomial basis.
//!
//! Elements are coefficient vectors over `F_p` in the basis `1, t, ..., t^{n-1}`
//! where `t` is a root of the field modulus. The modulus is the first monic
//! irreducible polynomial of degree `n` when coefficient lists `[c0, c1, ...]`
//! are compared lexicographically, so every run builds the same model.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

/// Description of `F_q`, `q = p^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    pub p: u64,
    pub n: u32,
    /// Monic modulus, ascending coefficients, length `n + 1`.
    pub modulus: Vec<u64>,
    pub q: u64,
}

/// Arithmetic operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow(u64),
}

/// An element of a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: Arc<FieldSpec>,
    coeffs: Vec<u64>,
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        (a as u128 + p as u128 - b as u128) as u64
    }
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

/// Dense polynomials over `F_p`, used only to find and test field moduli.
mod fp {
    use super::{addmod, mulmod, powmod, submod};

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = powmod(m[dm], p - 2, p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = mulmod(r[top], inv_lead, p);
            let shift = top - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = submod(r[shift + i], mulmod(c, mi, p), p);
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulrem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = addmod(out[i + j], mulmod(x, y, p), p);
            }
        }
        rem(&out, m, p)
    }

    pub fn powrem(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulrem(&r, &b, m, p);
            }
            e >>= 1;
            if e > 0 {
                b = mulrem(&b, &b, m, p);
            }
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    fn prime_factors(mut n: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                out.push(d);
                while n % d == 0 {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    /// Rabin's irreducibility test for a monic `f` of degree `n >= 1`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = (f.len() - 1) as u64;
        if n == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        // frob[i] = x^{p^i} mod f
        let mut frob = vec![rem(&x, f, p)];
        for _ in 0..n {
            let next = powrem(frob.last().unwrap(), p, f, p);
            frob.push(next);
        }
        let minus_x = |h: &[u64]| {
            let mut d = h.to_vec();
            if d.len() < 2 {
                d.resize(2, 0);
            }
            d[1] = submod(d[1], 1, p);
            trim(&mut d);
            d
        };
        if !minus_x(&frob[n as usize]).is_empty() {
            return false;
        }
        for r in prime_factors(n) {
            let h = minus_x(&frob[(n / r) as usize]);
            if gcd(&h, f, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

/// Builds `F_{p^n}` with the canonical modulus.
pub fn construct_field(p: u64, n: u32) -> Result<Arc<FieldSpec>> {
    if !primal_check::miller_rabin(p) {
        return Err(Error::NonPrime(p));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let q = p.checked_pow(n).filter(|&q| q <= 1u64 << 63).ok_or(Error::Overflow { p, n })?;
    let modulus = if n == 1 {
        vec![0, 1]
    } else {
        let n = n as usize;
        // Lexicographic order with c0 most significant: an odometer whose
        // last digit moves fastest.
        // Every candidate with c0 = 0 is divisible by x, so start at c0 = 1.
        let mut digits = vec![0u64; n];
        digits[0] = 1;
        loop {
            let mut f = digits.clone();
            f.push(1);
            if fp::is_irreducible(&f, p) {
                break f;
            }
            let mut i = n;
            loop {
                // an irreducible polynomial exists for every degree, so the
                // odometer never wraps around completely
                i -= 1;
                digits[i] += 1;
                if digits[i] < p {
                    break;
                }
                digits[i] = 0;
            }
        }
    };
    Ok(Arc::new(FieldSpec { p, n, modulus, q }))
}

impl FieldSpec {
    /// Odd characteristic check required for curve work.
    pub fn require_odd(&self) -> Result<()> {
        if self.p == 2 {
            Err(Error::EvenCharacteristic)
        } else {
            Ok(())
        }
    }

    pub fn degree(&self) -> usize {
        self.n as usize
    }

    /// `"p^n"` label.
    pub fn label(&self) -> String {
        format!("{}^{}", self.p, self.n)
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { spec: self.clone(), coeffs: vec![0; self.degree()] }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(self: &Arc<Self>, c: i64) -> FieldElement {
        let mut coeffs = vec![0; self.degree()];
        coeffs[0] = c.rem_euclid(self.p as i64) as u64;
        FieldElement { spec: self.clone(), coeffs }
    }

    /// Element with the given coordinates (reduced mod p, padded with zeros).
    pub fn element(self: &Arc<Self>, coords: &[i64]) -> Result<FieldElement> {
        if coords.len() > self.degree() {
            return Err(Error::InvalidArgument(format!(
                "{} coordinates given for a degree {} field",
                coords.len(),
                self.n
            )));
        }
        let mut coeffs = vec![0; self.degree()];
        for (c, &x) in coeffs.iter_mut().zip(coords) {
            *c = x.rem_euclid(self.p as i64) as u64;
        }
        Ok(FieldElement { spec: self.clone(), coeffs })
    }

    /// Element whose base-p digits are its coordinates.
    pub fn from_index(self: &Arc<Self>, mut idx: u64) -> FieldElement {
        let mut coeffs = vec![0; self.degree()];
        for c in coeffs.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        FieldElement { spec: self.clone(), coeffs }
    }

    /// The class of `t` (for n = 1 this is the constant 0, since the
    /// modulus is `x`).
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        let mut coeffs = vec![0; self.degree()];
        if self.n > 1 {
            coeffs[1] = 1;
        }
        FieldElement { spec: self.clone(), coeffs }
    }

    /// All field elements in index order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    // Raw coefficient-slice arithmetic, shared with the point counter.

    pub(crate) fn raw_add(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..out.len() {
            out[i] = addmod(a[i], b[i], self.p);
        }
    }

    pub(crate) fn raw_sub(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        for i in 0..out.len() {
            out[i] = submod(a[i], b[i], self.p);
        }
    }

    /// `out = a * b`; `scratch` must hold at least `2n - 1` words.
    pub(crate) fn raw_mul(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
        let n = self.degree();
        let p = self.p;
        if n == 1 {
            out[0] = mulmod(a[0], b[0], p);
            return;
        }
        let prod = &mut scratch[..2 * n - 1];
        prod.fill(0);
        if p < (1 << 31) {
            // products fit in 62 bits; reduce once per term pair sum
            for i in 0..n {
                if a[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
                }
            }
        } else {
            for i in 0..n {
                for j in 0..n {
                    prod[i + j] = addmod(prod[i + j], mulmod(a[i], b[j], p), p);
                }
            }
        }
        // x^n = -(m_0 + ... + m_{n-1} x^{n-1})
        for top in (n..2 * n - 1).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..n {
                let s = top - n + i;
                prod[s] = submod(prod[s], mulmod(c, self.modulus[i], p), p);
            }
        }
        out.copy_from_slice(&prod[..n]);
    }

    pub(crate) fn raw_index(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0u64, |acc, &c| acc * self.p + c)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

impl FieldElement {
    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Base-p index of the element (coordinates as digits).
    pub fn index(&self) -> u64 {
        self.spec.raw_index(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = vec![0; self.coeffs.len()];
        self.spec.raw_add(&self.coeffs, &other.coeffs, &mut out);
        Ok(Self { spec: self.spec.clone(), coeffs: out })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = vec![0; self.coeffs.len()];
        self.spec.raw_sub(&self.coeffs, &other.coeffs, &mut out);
        Ok(Self { spec: self.spec.clone(), coeffs: out })
    }

    pub fn neg(&self) -> Self {
        let p = self.spec.p;
        let coeffs = self.coeffs.iter().map(|&c| if c == 0 { 0 } else { p - c }).collect();
        Self { spec: self.spec.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.coeffs.len();
        let mut out = vec![0; n];
        let mut scratch = vec![0; 2 * n];
        self.spec.raw_mul(&self.coeffs, &other.coeffs, &mut out, &mut scratch);
        Self { spec: self.spec.clone(), coeffs: out }
    }

    /// Square-and-multiply.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = self.spec.one();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_unchecked(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_unchecked(&b);
            }
        }
        r
    }

    /// Multiplicative inverse via `a^(q-2)`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.spec.q - 2))
    }

    /// Quadratic character `a^((q-1)/2)` as -1, 0 or +1.
    pub fn quadratic_character(&self) -> Result<i8> {
        self.spec.require_odd()?;
        if self.is_zero() {
            return Ok(0);
        }
        let e = self.pow((self.spec.q - 1) / 2);
        Ok(if e.is_one() { 1 } else { -1 })
    }
}

/// One binary (or unary, for `Inv`/`Pow`) field operation.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    match op {
        FieldOp::Add => a.add(b),
        FieldOp::Sub => a.sub(b),
        FieldOp::Mul => a.mul(b),
        FieldOp::Inv => a.inv(),
        FieldOp::Pow(e) => Ok(a.pow(e)),
    }
}

/// Quadratic character of `a`.
pub fn quadratic_character(a: &FieldElement) -> Result<i8> {
    a.quadratic_character()
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", parts.join(":"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f = construct_field(3, 2).unwrap();
        assert_eq!(f.modulus, vec![1, 0, 1]);
        assert_eq!(f.q, 9);
    }

    #[test]
    fn prime_field_modulus_is_x() {
        let f = construct_field(5, 1).unwrap();
        assert_eq!(f.modulus, vec![0, 1]);
        assert_eq!(f.q, 5);
    }

    #[test]
    fn composite_and_overflow_rejected() {
        assert_eq!(construct_field(4, 1).unwrap_err(), Error::NonPrime(4));
        assert_eq!(construct_field(3, 40).unwrap_err(), Error::Overflow { p: 3, n: 40 });
    }

    #[test]
    fn worked_arithmetic() {
        let f5 = construct_field(5, 1).unwrap();
        assert_eq!(f5.from_int(2).pow(3), f5.from_int(3));
        let f9 = construct_field(3, 2).unwrap();
        let x = f9.generator();
        assert_eq!(x.mul(&x).unwrap(), f9.from_int(2));
    }

    #[test]
    fn characters_in_f5() {
        let f5 = construct_field(5, 1).unwrap();
        assert_eq!(f5.from_int(4).quadratic_character().unwrap(), 1);
        assert_eq!(f5.from_int(2).quadratic_character().unwrap(), -1);
        assert_eq!(f5.zero().quadratic_character().unwrap(), 0);
    }

    #[test]
    fn even_characteristic_character_rejected() {
        let f2 = construct_field(2, 1).unwrap();
        assert_eq!(f2.one().quadratic_character(), Err(Error::EvenCharacteristic));
    }

    #[test]
    fn mismatch_and_division_by_zero() {
        let f5 = construct_field(5, 1).unwrap();
        let f7 = construct_field(7, 1).unwrap();
        assert_eq!(f5.one().add(&f7.one()).unwrap_err(), Error::FieldMismatch);
        assert_eq!(f5.zero().inv().unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn large_prime_modulus_found() {
        // exhaustive scanning is hopeless here; Rabin's test is not
        let f = construct_field(1_000_000_007, 2).unwrap();
        assert_eq!(f.modulus.len(), 3);
        let a = f.element(&[12345, 678]).unwrap();
        assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
    }
}
