//! Exact power series for divisor-counting Dirichlet series.
//!
//! With `u = q^{-s}`, the k-free indicator has generating function
//! `Z(u) / Z(u^k)` and the totient `Z(qu) / Z(u)`. Both are rational in `u`,
//! so their coefficients come from exact division by a unit polynomial. The
//! Euler-product oracles rebuild the same series from place counts alone.

use rug::{Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::zeta::{qpow, LPolynomial};

/// Which arithmetic function is being summed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Indicator of k-free divisors, `k >= 2`.
    Kfree(u32),
    Totient,
}

impl Kind {
    pub fn validate(self) -> Result<Self> {
        match self {
            Kind::Kfree(k) if k < 2 => Err(Error::InvalidArgument("k must be at least 2".into())),
            _ => Ok(self),
        }
    }

    /// The `k` of the oscillation scale `q^{X/2k}`; 1 for the totient.
    pub fn period(self) -> u32 {
        match self {
            Kind::Kfree(k) => k,
            Kind::Totient => 1,
        }
    }

    pub fn label(self) -> String {
        match self {
            Kind::Kfree(k) => format!("kfree(k={k})"),
            Kind::Totient => "totient".into(),
        }
    }
}

/// Power series with big-integer coefficients `a_0..=a_order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSeries {
    coeffs: Vec<Integer>,
}

impl IntegerSeries {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Integer::new(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Integer::from(1);
        s
    }

    /// Truncation of a polynomial.
    pub fn from_poly(poly: &[Integer], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (c, p) in s.coeffs.iter_mut().zip(poly) {
            *c = p.clone();
        }
        s
    }

    pub fn from_i64(poly: &[i64], order: usize) -> Self {
        let poly: Vec<Integer> = poly.iter().map(|&c| Integer::from(c)).collect();
        Self::from_poly(&poly, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &Integer {
        &self.coeffs[n]
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Integer::from(a + b)).collect();
        Self { coeffs }
    }

    /// Truncated product (to the smaller order), skipping zero terms.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if *b != 0 {
                    out.coeffs[i + j] += Integer::from(a * b);
                }
            }
        }
        out
    }

    /// Multiplication by a polynomial.
    pub fn mul_poly(&self, poly: &[Integer]) -> Self {
        self.mul(&Self::from_poly(poly, self.order()))
    }

    /// Division by a polynomial with constant term `±1`, i.e. multiplication
    /// by its inverse as a unit power series, computed by the recurrence
    /// `c_n = (a_n - sum_{i>=1} p_i c_{n-i}) / p_0`.
    pub fn div_poly(&self, poly: &[Integer]) -> Result<Self> {
        let p0 = poly.first().ok_or_else(|| Error::InvalidArgument("empty divisor".into()))?;
        let sign = if *p0 == 1 {
            1
        } else if *p0 == -1 {
            -1
        } else {
            return Err(Error::InvalidArgument("divisor constant term must be ±1".into()));
        };
        let terms: Vec<(usize, &Integer)> = poly.iter().enumerate().skip(1).filter(|(_, c)| **c != 0).collect();
        let mut out = Self::zero(self.order());
        for n in 0..=self.order() {
            let mut v = self.coeffs[n].clone();
            for &(i, c) in &terms {
                if i > n {
                    break;
                }
                v -= Integer::from(c * &out.coeffs[n - i]);
            }
            out.coeffs[n] = if sign == 1 { v } else { -v };
        }
        Ok(out)
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn inverse(&self) -> Result<Self> {
        Self::one(self.order()).div_poly(&self.coeffs)
    }

    /// `A(u^k)`, truncated to `order`.
    pub fn substitute_power(&self, k: usize, order: usize) -> Self {
        let mut out = Self::zero(order);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * k > order {
                break;
            }
            out.coeffs[i * k] = c.clone();
        }
        out
    }

    /// `A(cu)`.
    pub fn scale(&self, c: &Integer) -> Self {
        let mut pow = Integer::from(1);
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = Integer::from(a * &pow);
                pow *= c;
                v
            })
            .collect();
        Self { coeffs }
    }

    /// `A^alpha` for `a_0 = 1` and any integer `alpha`, by the recurrence
    /// `m b_m = sum_{i=1}^m ((alpha + 1) i - m) a_i b_{m-i}`.
    pub fn pow_big(&self, alpha: &Integer) -> Result<Self> {
        if self.coeffs[0] != 1 {
            return Err(Error::InvalidArgument("power needs constant term 1".into()));
        }
        let nz: Vec<(usize, &Integer)> = self.coeffs.iter().enumerate().skip(1).filter(|(_, c)| **c != 0).collect();
        let alpha1 = Integer::from(alpha + 1);
        let mut out = Self::one(self.order());
        for m in 1..=self.order() {
            let mut acc = Integer::new();
            for &(i, a) in &nz {
                if i > m {
                    break;
                }
                let w = Integer::from(&alpha1 * i) - m;
                acc += w * a * &out.coeffs[m - i];
            }
            let (quot, rem) = acc.div_rem(Integer::from(m));
            if rem != 0 {
                return Err(Error::NonIntegral { what: "series power", index: m });
            }
            out.coeffs[m] = quot;
        }
        Ok(out)
    }

    /// `[a_0, a_0 + a_1, ...]`: entry `X - 1` is `sum_{n < X} a_n`.
    pub fn prefix_sums(&self) -> Vec<Integer> {
        let mut acc = Integer::new();
        self.coeffs
            .iter()
            .map(|c| {
                acc += c;
                acc.clone()
            })
            .collect()
    }
}

/// Exact summatory values `T[X]` for `X = 1..=xmax`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummatoryTable {
    pub kind: Kind,
    pub q: u64,
    pub label: String,
    values: Vec<Integer>,
}

impl SummatoryTable {
    fn from_series(kind: Kind, q: u64, series: &IntegerSeries) -> Self {
        Self { kind, q, label: String::new(), values: series.prefix_sums() }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn xmax(&self) -> usize {
        self.values.len()
    }

    /// `T[X]`.
    pub fn get(&self, x: usize) -> Result<&Integer> {
        if x == 0 || x > self.values.len() {
            return Err(Error::OutOfRange { x, max: self.values.len() });
        }
        Ok(&self.values[x - 1])
    }

    pub fn values(&self) -> &[Integer] {
        &self.values
    }

    /// True when both tables hold identical values (labels ignored).
    pub fn same_values(&self, other: &Self) -> bool {
        self.kind == other.kind && self.values == other.values
    }
}

impl Serialize for SummatoryTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SummatoryTable", 4)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("label", &self.label)?;
        st.serialize_field("xmax", &self.xmax())?;
        let v: Vec<String> = self.values.iter().map(|c| c.to_string()).collect();
        st.serialize_field("values", &v)?;
        st.end()
    }
}

fn poly_mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Integer::from(x * y);
        }
    }
    out
}

/// `1 - c u^k` as a dense polynomial.
fn one_minus(c: Integer, k: usize) -> Vec<Integer> {
    let mut p = vec![Integer::new(); k + 1];
    p[0] = Integer::from(1);
    p[k] = -c;
    p
}

/// `L(c u^k)` as a dense polynomial.
fn l_scaled(l: &LPolynomial, c: u64, k: usize) -> Vec<Integer> {
    let mut p = vec![Integer::new(); 2 * l.genus() * k + 1];
    for (i, b) in l.coefficients().iter().enumerate() {
        p[i * k] = Integer::from(b * qpow(c, i as u32));
    }
    p
}

/// Coefficients of `Z(u) = L(u) / ((1 - u)(1 - qu))` through `u^xmax`.
pub fn zeta_series(l: &LPolynomial, xmax: usize) -> Result<IntegerSeries> {
    let q = Integer::from(l.q());
    let den = poly_mul(&one_minus(Integer::from(1), 1), &one_minus(q, 1));
    IntegerSeries::from_poly(l.coefficients(), xmax).div_poly(&den)
}

/// `Q_k(X)` for `X = 1..=xmax` from `Z(u) / Z(u^k)`.
pub fn summatory_kfree(l: &LPolynomial, k: u32, xmax: usize) -> Result<SummatoryTable> {
    Kind::Kfree(k).validate()?;
    check_xmax(xmax)?;
    let q = l.q();
    let ku = k as usize;
    // Z(u)/Z(u^k) = L(u)(1 - u^k)(1 - q u^k) / ((1 - u)(1 - qu) L(u^k))
    let num = poly_mul(l.coefficients(), &poly_mul(&one_minus(Integer::from(1), ku), &one_minus(Integer::from(q), ku)));
    let den =
        poly_mul(&l_scaled(l, 1, ku), &poly_mul(&one_minus(Integer::from(1), 1), &one_minus(Integer::from(q), 1)));
    let series = IntegerSeries::from_poly(&num, xmax - 1).div_poly(&den)?;
    Ok(SummatoryTable::from_series(Kind::Kfree(k), q, &series))
}

/// `F_Phi(X)` for `X = 1..=xmax` from `Z(qu) / Z(u)`.
pub fn summatory_totient(l: &LPolynomial, xmax: usize) -> Result<SummatoryTable> {
    check_xmax(xmax)?;
    let q = l.q();
    let qi = Integer::from(q);
    // Z(qu) = L(qu) / ((1 - qu)(1 - q^2 u)),  1/Z(u) = (1 - u)(1 - qu) / L(u)
    let num = poly_mul(&l_scaled(l, q, 1), &poly_mul(&one_minus(Integer::from(1), 1), &one_minus(qi.clone(), 1)));
    let den = poly_mul(l.coefficients(), &poly_mul(&one_minus(qi.clone(), 1), &one_minus(Integer::from(&qi * &qi), 1)));
    let series = IntegerSeries::from_poly(&num, xmax - 1).div_poly(&den)?;
    Ok(SummatoryTable::from_series(Kind::Totient, q, &series))
}

fn check_xmax(xmax: usize) -> Result<()> {
    if xmax == 0 {
        Err(Error::InvalidArgument("Xmax must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Number of places of each degree `d = 1..=dmax`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeDegreeCounts {
    pub q: u64,
    counts: Vec<Integer>,
}

impl PrimeDegreeCounts {
    pub fn dmax(&self) -> usize {
        self.counts.len()
    }

    /// `P_d`.
    pub fn get(&self, d: usize) -> &Integer {
        &self.counts[d - 1]
    }

    pub fn counts(&self) -> &[Integer] {
        &self.counts
    }

    /// Place counts of a curve from its L-polynomial.
    pub fn from_l(l: &LPolynomial, dmax: usize) -> Result<Self> {
        prime_counts(l.q(), &l.point_counts_extended(dmax), dmax)
    }

    /// Drops the single degree-one place at infinity of the projective line,
    /// leaving the places of `F_q[x]` (monic irreducible polynomials).
    pub fn without_infinite_place(mut self) -> Result<Self> {
        if self.counts.is_empty() || self.counts[0] == 0 {
            return Err(Error::InvalidArgument("no degree-one place to remove".into()));
        }
        self.counts[0] -= 1;
        Ok(self)
    }

    /// `sum_{d | m} d P_d` for `m = 1..=dmax`.
    pub fn point_counts(&self) -> Vec<Integer> {
        (1..=self.dmax())
            .map(|m| (1..=m).filter(|d| m % d == 0).map(|d| Integer::from(d) * self.get(d)).sum())
            .collect()
    }
}

/// Classical Möbius function.
pub fn mobius(mut n: usize) -> i32 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `P_d = (1/d) sum_{e | d} mu(e) N_{d/e}` from `N_1..=N_dmax`.
pub fn prime_counts(q: u64, n: &[Integer], dmax: usize) -> Result<PrimeDegreeCounts> {
    if n.len() < dmax {
        return Err(Error::InvalidArgument(format!("need N_m for m <= {dmax}")));
    }
    let mut counts = Vec::with_capacity(dmax);
    for d in 1..=dmax {
        let mut acc = Integer::new();
        for e in (1..=d).filter(|e| d % e == 0) {
            acc += mobius(e) * Integer::from(&n[d / e - 1]);
        }
        let (quot, rem) = acc.div_rem(Integer::from(d));
        if rem != 0 || quot < 0 {
            return Err(Error::NonIntegral { what: "place count", index: d });
        }
        counts.push(quot);
    }
    Ok(PrimeDegreeCounts { q, counts })
}

/// Multiplies one local Euler factor per degree, raised to the number of
/// places of that degree.
fn euler_product(
    primes: &PrimeDegreeCounts,
    order: usize,
    local: impl Fn(usize, usize) -> IntegerSeries,
) -> Result<IntegerSeries> {
    if primes.dmax() < order {
        return Err(Error::InvalidArgument(format!("place counts needed up to degree {order}")));
    }
    let mut acc = IntegerSeries::one(order);
    for d in 1..=order {
        let pd = primes.get(d);
        if *pd == 0 {
            continue;
        }
        let inner = order / d;
        let factor = local(d, inner).pow_big(pd)?.substitute_power(d, order);
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

/// `Q_k` from the Euler product `prod_P (1 + u^{deg P} + ... + u^{(k-1) deg P})`.
pub fn oracle_kfree(primes: &PrimeDegreeCounts, k: u32, xmax: usize) -> Result<SummatoryTable> {
    Kind::Kfree(k).validate()?;
    check_xmax(xmax)?;
    let ones = vec![1i64; k as usize];
    let series = euler_product(primes, xmax - 1, |_, inner| IntegerSeries::from_i64(&ones, inner))?;
    Ok(SummatoryTable::from_series(Kind::Kfree(k), primes.q, &series))
}

/// `F_Phi` from local factors `1 + sum_{m>=1} (q^{dm} - q^{d(m-1)}) u^{dm}`.
pub fn oracle_totient(primes: &PrimeDegreeCounts, xmax: usize) -> Result<SummatoryTable> {
    check_xmax(xmax)?;
    let q = primes.q;
    let series = euler_product(primes, xmax - 1, |d, inner| {
        let norm = qpow(q, d as u32);
        let mut s = IntegerSeries::one(inner);
        let mut prev = Integer::from(1);
        for m in 1..=inner {
            let cur = Integer::from(&prev * &norm);
            s.coeffs[m] = Integer::from(&cur - &prev);
            prev = cur;
        }
        s
    })?;
    Ok(SummatoryTable::from_series(Kind::Totient, q, &series))
}

/// Number of k-free monic polynomials of degree `< X` over `F_q`.
pub fn genus0_kfree(q: u64, k: u32, x: u32) -> Result<Integer> {
    Kind::Kfree(k).validate()?;
    if x == 0 {
        return Err(Error::InvalidArgument("X must be at least 1".into()));
    }
    let qm1 = Integer::from(q - 1);
    let mut v = (qpow(q, x) - 1u32) / &qm1;
    if x > k {
        v -= Integer::from(q) * (qpow(q, x - k) - 1u32) / &qm1;
    }
    Ok(v)
}

/// Sum of the totient over monic polynomials of degree `< X` over `F_q`.
pub fn genus0_totient(q: u64, x: u32) -> Result<Integer> {
    if x == 0 {
        return Err(Error::InvalidArgument("X must be at least 1".into()));
    }
    let num = qpow(q, 2 * x - 1) + 1u32;
    let (quot, rem) = num.div_rem(Integer::from(q + 1));
    debug_assert_eq!(rem, 0);
    Ok(quot)
}

/// `Q_{k,0}(Y)` extended by zero to `Y <= 0`.
pub fn genus0_kfree_or_zero(q: u64, k: u32, y: i64) -> Result<Integer> {
    if y <= 0 {
        Ok(Integer::new())
    } else {
        genus0_kfree(q, k, y as u32)
    }
}

/// Ratio `T[X] / base^X` as an exact rational, for growth checks.
pub fn growth_ratio(table: &SummatoryTable, base: &Integer, x: usize) -> Result<Rational> {
    use rug::ops::Pow;
    let t = table.get(x)?;
    Ok(Rational::from((t.clone(), base.clone().pow(x as u32))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> LPolynomial {
        LPolynomial::new(5, 1, vec![Integer::from(1), Integer::from(-2), Integer::from(5)]).unwrap()
    }

    fn ints(v: &[Integer]) -> Vec<i64> {
        v.iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn zeta_series_examples() {
        let z = zeta_series(&worked(), 10).unwrap();
        assert_eq!(*z.coeff(0), 1);
        assert_eq!(*z.coeff(1), 4);
        let z0 = zeta_series(&LPolynomial::genus0(3), 8).unwrap();
        for n in 0..=8u32 {
            assert_eq!(*z0.coeff(n as usize), (qpow(3, n + 1) - 1u32) / 2u32);
        }
    }

    #[test]
    fn divisor_count_identity() {
        let l = worked();
        let h = Integer::from(4);
        let z = zeta_series(&l, 30).unwrap();
        for n in 1..=30u32 {
            let expect = Integer::from(&h * (qpow(5, n) - 1u32)) / 4u32;
            assert_eq!(*z.coeff(n as usize), expect);
        }
    }

    #[test]
    fn place_counts() {
        let p = PrimeDegreeCounts::from_l(&worked(), 4).unwrap();
        assert_eq!(*p.get(1), 4);
        let p0 = prime_counts(2, &[Integer::from(3), Integer::from(5)], 2).unwrap();
        assert_eq!(ints(p0.counts()), vec![3, 1]);
        assert_eq!(ints(&p.point_counts()), ints(&worked().point_counts_extended(4)));
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i32> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn genus0_examples() {
        assert_eq!(genus0_kfree(2, 2, 3).unwrap(), 5);
        assert_eq!(genus0_kfree(3, 3, 1).unwrap(), 1);
        assert_eq!(genus0_totient(2, 1).unwrap(), 1);
        assert_eq!(genus0_totient(2, 2).unwrap(), 3);
        assert_eq!(genus0_totient(5, 3).unwrap(), 521);
        assert!(genus0_kfree(2, 1, 3).is_err());
    }

    #[test]
    fn finite_place_oracles_match_genus0_closed_forms() {
        for q in [2u64, 3, 5] {
            let primes =
                PrimeDegreeCounts::from_l(&LPolynomial::genus0(q), 12).unwrap().without_infinite_place().unwrap();
            for k in [2u32, 3] {
                let t = oracle_kfree(&primes, k, 12).unwrap();
                for x in 1..=12u32 {
                    assert_eq!(*t.get(x as usize).unwrap(), genus0_kfree(q, k, x).unwrap());
                }
            }
            let t = oracle_totient(&primes, 12).unwrap();
            for x in 1..=12u32 {
                assert_eq!(*t.get(x as usize).unwrap(), genus0_totient(q, x).unwrap());
            }
        }
    }

    #[test]
    fn projective_line_tables() {
        for q in [2u64, 3, 5] {
            let l = LPolynomial::genus0(q);
            for k in [2u32, 3] {
                let t = summatory_kfree(&l, k, 20).unwrap();
                for x in 1..=20i64 {
                    let mut expect = Integer::new();
                    for i in 0..k as i64 {
                        expect += genus0_kfree_or_zero(q, k, x - i).unwrap();
                    }
                    assert_eq!(*t.get(x as usize).unwrap(), expect);
                }
            }
            // including the place at infinity turns (q^{2X-1}+1)/(q+1) into q^{2X-2}
            let t = summatory_totient(&l, 20).unwrap();
            let primes = PrimeDegreeCounts::from_l(&l, 20).unwrap();
            assert!(t.same_values(&oracle_totient(&primes, 20).unwrap()));
            for x in 1..=20u32 {
                assert_eq!(*t.get(x as usize).unwrap(), qpow(q, 2 * x - 2));
            }
        }
    }

    #[test]
    fn worked_curve_oracles() {
        let l = worked();
        let primes = PrimeDegreeCounts::from_l(&l, 12).unwrap();
        let kf = summatory_kfree(&l, 2, 12).unwrap();
        assert_eq!(*kf.get(1).unwrap(), 1);
        assert!(kf.same_values(&oracle_kfree(&primes, 2, 12).unwrap()));
        let tot = summatory_totient(&l, 12).unwrap();
        assert_eq!(*tot.get(1).unwrap(), 1);
        assert!(tot.same_values(&oracle_totient(&primes, 12).unwrap()));
    }

    #[test]
    fn large_k_counts_all_divisors() {
        let l = worked();
        let primes = PrimeDegreeCounts::from_l(&l, 10).unwrap();
        let t = oracle_kfree(&primes, 11, 10).unwrap();
        let z = zeta_series(&l, 9).unwrap();
        assert_eq!(t.values(), z.prefix_sums().as_slice());
    }

    #[test]
    fn single_place_totient_factor() {
        let primes = PrimeDegreeCounts { q: 7, counts: vec![Integer::from(1), Integer::new(), Integer::new()] };
        let t = oracle_totient(&primes, 3).unwrap();
        // coefficient of u^1 is q - 1
        assert_eq!(Integer::from(t.get(2).unwrap() - t.get(1).unwrap()), 6);
    }

    #[test]
    fn series_inverse_and_power() {
        let a = IntegerSeries::from_i64(&[1, 3, -2, 5], 10);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), IntegerSeries::one(10));
        let cube = a.mul(&a).mul(&a);
        assert_eq!(a.pow_big(&Integer::from(3)).unwrap(), cube);
        assert_eq!(a.pow_big(&Integer::from(-1)).unwrap(), inv);
    }
}
