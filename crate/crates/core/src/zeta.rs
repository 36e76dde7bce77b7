//! L-polynomials, zeta values and inverse zeros.
//!
//! For a curve of genus `g` over `F_q`,
//! `Z(u) = L(u) / ((1 - u)(1 - qu))` with `L(u) = prod_j (1 - gamma_j u)`
//! of degree `2g`. Everything integral here is exact; inverse zeros are
//! complex doubles.

use std::f64::consts::PI;

use num_complex::Complex64;
use rug::{Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::curve::PointCounts;
use crate::error::{Error, Result};

/// Root-finder tolerance on successive iterates (relative).
pub const ROOT_TOLERANCE: f64 = 1e-12;
/// Iteration cap for the simultaneous root iteration.
pub const ROOT_MAX_ITER: usize = 500;
/// Distance below which two computed roots are the same root.
pub const ROOT_CLUSTER: f64 = 1e-8;
/// Maximum tolerated `| |gamma| - sqrt(q) |` before reporting a violation.
pub const RH_TOLERANCE: f64 = 1e-6;
/// Minimum distance from a pole for complex evaluation.
pub const POLE_EPS: f64 = 1e-12;

/// `L(u) = sum_i b_i u^i` with exact integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    q: u64,
    g: usize,
    b: Vec<Integer>,
}

impl LPolynomial {
    /// Validates `b_0 = 1`, the degree and the functional equation.
    pub fn new(q: u64, g: usize, b: Vec<Integer>) -> Result<Self> {
        let l = Self::from_coefficients_unchecked(q, g, b)?;
        l.check_functional_equation()?;
        Ok(l)
    }

    /// Only the shape is checked. Used to inject faults in self-tests.
    pub fn from_coefficients_unchecked(q: u64, g: usize, b: Vec<Integer>) -> Result<Self> {
        if b.len() != 2 * g + 1 {
            return Err(Error::InvalidArgument(format!("expected {} coefficients, got {}", 2 * g + 1, b.len())));
        }
        if b[0] != 1 {
            return Err(Error::InvalidArgument("L(0) must be 1".into()));
        }
        if q < 2 {
            return Err(Error::InvalidArgument("q must be at least 2".into()));
        }
        Ok(Self { q, g, b })
    }

    /// `L = 1` for the rational function field.
    pub fn genus0(q: u64) -> Self {
        Self { q, g: 0, b: vec![Integer::from(1)] }
    }

    /// `prod_i (1 - a_i u + q u^2)`: a product of genus-one factors. Valid
    /// Weil polynomials arise whenever `|a_i| <= 2 sqrt(q)`.
    pub fn from_weil_factors(q: u64, traces: &[i64]) -> Result<Self> {
        let mut b = vec![Integer::from(1)];
        for &a in traces {
            let factor = [Integer::from(1), Integer::from(-a), Integer::from(q)];
            b = poly_mul(&b, &factor);
        }
        Self::new(q, traces.len(), b)
    }

    /// `b_{2g-i} = q^{g-i} b_i` for every `i`.
    pub fn check_functional_equation(&self) -> Result<()> {
        for i in 0..=self.g {
            let lhs = &self.b[2 * self.g - i];
            let rhs = qpow(self.q, (self.g - i) as u32) * &self.b[i];
            if *lhs != rhs {
                return Err(Error::FunctionalEquation { index: 2 * self.g - i });
            }
        }
        Ok(())
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.b
    }

    pub fn eval_rational(&self, u: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.b.iter().rev() {
            acc *= u;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, u: Complex64) -> Complex64 {
        horner(&self.b, u)
    }

    /// Power sums `S_m = sum_j gamma_j^m` for `m = 1..=mmax` by Newton's
    /// identities on the full polynomial.
    pub fn power_sums(&self, mmax: usize) -> Vec<Integer> {
        let deg = 2 * self.g;
        let coeff = |i: usize| if i <= deg { self.b[i].clone() } else { Integer::new() };
        // log L(u) = -sum S_m u^m / m  =>  S_m = -m b_m - sum_{i=1}^{m-1} b_i S_{m-i}
        let mut s: Vec<Integer> = Vec::with_capacity(mmax);
        for m in 1..=mmax {
            let mut v = -Integer::from(m) * coeff(m);
            for i in 1..m.min(deg + 1) {
                v -= coeff(i) * &s[m - i - 1];
            }
            s.push(v);
        }
        s
    }

    /// `N_m = q^m + 1 - S_m` for `m = 1..=mmax`, valid for every `m`.
    pub fn point_counts_extended(&self, mmax: usize) -> Vec<Integer> {
        self.power_sums(mmax).into_iter().enumerate().map(|(i, s)| qpow(self.q, i as u32 + 1) + 1 - s).collect()
    }
}

impl Serialize for LPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LPolynomial", 3)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("g", &self.g)?;
        let b: Vec<String> = self.b.iter().map(|c| c.to_string()).collect();
        st.serialize_field("b", &b)?;
        st.end()
    }
}

/// `q^e` as a big integer.
pub fn qpow(q: u64, e: u32) -> Integer {
    use rug::ops::Pow;
    Integer::from(q).pow(e)
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

fn horner(coeffs: &[Integer], u: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * u + c.to_f64())
}

/// Solves Newton's identities for `b_1..b_g` and completes `L` with the
/// functional equation.
pub fn l_polynomial(counts: &PointCounts) -> Result<LPolynomial> {
    let (q, g) = (counts.q, counts.g);
    let s: Vec<Integer> = (1..=g).map(|m| qpow(q, m as u32) + 1 - counts.n[m - 1]).collect();
    let mut b = vec![Integer::new(); 2 * g + 1];
    b[0] = Integer::from(1);
    for i in 1..=g {
        let mut acc = Integer::new();
        for m in 1..=i {
            acc += Integer::from(&s[m - 1] * &b[i - m]);
        }
        let (quot, rem) = acc.div_rem(Integer::from(i));
        if rem != 0 {
            return Err(Error::NonIntegral { what: "L-polynomial", index: i });
        }
        b[i] = -quot;
    }
    for i in 0..g {
        b[2 * g - i] = qpow(q, (g - i) as u32) * &b[i];
    }
    LPolynomial::new(q, g, b)
}

/// `h = L(1)`.
pub fn class_number(l: &LPolynomial) -> Integer {
    l.b.iter().sum()
}

/// Exact `Z(u)` at a rational point.
pub fn zeta_eval_exact(l: &LPolynomial, u: &Rational) -> Result<Rational> {
    let one_minus_u = Rational::from(1) - u;
    let one_minus_qu = Rational::from(1) - Rational::from(l.q) * u;
    if one_minus_u == 0 || one_minus_qu == 0 {
        return Err(Error::PoleAt(u.to_string()));
    }
    Ok(l.eval_rational(u) / (one_minus_u * one_minus_qu))
}

/// `zeta(k) = Z(q^{-k})`, exact.
pub fn zeta_at_q_power(l: &LPolynomial, k: u32) -> Result<Rational> {
    zeta_eval_exact(l, &Rational::from((1, qpow(l.q, k))))
}

/// `Z(u)` in complex double precision.
pub fn zeta_eval(l: &LPolynomial, u: Complex64) -> Result<Complex64> {
    let q = l.q as f64;
    if (u - 1.0).norm() <= POLE_EPS || (u - 1.0 / q).norm() <= POLE_EPS {
        return Err(Error::PoleAt(format!("{u}")));
    }
    Ok(l.eval_complex(u) / ((1.0 - u) * (1.0 - q * u)))
}

/// Numerator `L' D - L D'` of `Z'` where `D(u) = (1 - u)(1 - qu)`.
fn derivative_numerator(l: &LPolynomial) -> Vec<Integer> {
    let q = Integer::from(l.q);
    let d = [Integer::from(1), -Integer::from(&q + 1), q.clone()];
    let dd = [-Integer::from(&q + 1), Integer::from(2) * &q];
    let lp: Vec<Integer> = l.b.iter().enumerate().skip(1).map(|(i, c)| Integer::from(i) * c).collect();
    let mut out = if lp.is_empty() { vec![Integer::new(); 1] } else { poly_mul(&lp, &d) };
    let rhs = poly_mul(&l.b, &dd);
    if out.len() < rhs.len() {
        out.resize(rhs.len(), Integer::new());
    }
    for (o, r) in out.iter_mut().zip(rhs) {
        *o -= r;
    }
    out
}

/// `Z'(u0)` from the exact quotient-rule numerator.
pub fn zeta_derivative_at(l: &LPolynomial, u0: Complex64) -> Result<Complex64> {
    let q = l.q as f64;
    if (u0 - 1.0).norm() <= POLE_EPS || (u0 - 1.0 / q).norm() <= POLE_EPS {
        return Err(Error::PoleAt(format!("{u0}")));
    }
    let num = horner(&derivative_numerator(l), u0);
    let d = (1.0 - u0) * (1.0 - q * u0);
    Ok(num / (d * d))
}

/// The `2g` inverse zeros of `L`, conjugate-paired.
///
/// Indices `0..g` hold the primary half with `theta` ascending in `[0, pi]`;
/// index `j + g` holds the conjugate of index `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseZeroSet {
    pub q: u64,
    pub gamma: Vec<Complex64>,
    pub theta: Vec<f64>,
    pub multiplicity: Vec<usize>,
    pub simple: bool,
}

impl InverseZeroSet {
    pub fn genus(&self) -> usize {
        self.gamma.len() / 2
    }

    /// Index of the conjugate partner.
    pub fn partner(&self, j: usize) -> usize {
        let g = self.genus();
        if j < g {
            j + g
        } else {
            j - g
        }
    }

    /// `max_j | |gamma_j| - sqrt(q) |`.
    pub fn rh_deviation(&self) -> f64 {
        let r = (self.q as f64).sqrt();
        self.gamma.iter().map(|z| (z.norm() - r).abs()).fold(0.0, f64::max)
    }

    /// Coefficients of `prod_j (1 - gamma_j u)`.
    pub fn expand(&self) -> Vec<Complex64> {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &z in &self.gamma {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i] += ci;
                next[i + 1] -= ci * z;
            }
            c = next;
        }
        c
    }

    /// Multiplicities of the distinct zeros, for error reports.
    pub fn multiplicity_report(&self) -> Vec<usize> {
        self.multiplicity.clone()
    }
}

/// Polynomials over Q used for the squarefree decomposition.
mod qpoly {
    use rug::Rational;

    pub type QPoly = Vec<Rational>;

    pub fn trim(a: &mut QPoly) {
        while a.last().is_some_and(|c| *c == 0) {
            a.pop();
        }
    }

    pub fn deriv(a: &QPoly) -> QPoly {
        let mut d: QPoly = a.iter().enumerate().skip(1).map(|(i, c)| Rational::from(i) * c).collect();
        trim(&mut d);
        d
    }

    pub fn monic(mut a: QPoly) -> QPoly {
        trim(&mut a);
        if let Some(lead) = a.last().cloned() {
            for c in a.iter_mut() {
                *c /= &lead;
            }
        }
        a
    }

    pub fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
        let mut r = a.clone();
        trim(&mut r);
        let db = b.len() - 1;
        if r.len() <= db {
            return (vec![], r);
        }
        let mut quot = vec![Rational::new(); r.len() - db];
        while r.len() > db {
            let top = r.len() - 1;
            let c = Rational::from(&r[top] / &b[db]);
            for (i, bi) in b.iter().enumerate() {
                r[top - db + i] -= Rational::from(&c * bi);
            }
            quot[top - db] = c;
            r.pop();
            trim(&mut r);
        }
        trim(&mut quot);
        (quot, r)
    }

    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y);
            x = y;
            y = r;
        }
        monic(x)
    }

    pub fn sub(a: &QPoly, b: &QPoly) -> QPoly {
        let n = a.len().max(b.len());
        let mut out: QPoly = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_default();
                let y = b.get(i).cloned().unwrap_or_default();
                x - y
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Yun's algorithm: returns `(factor, multiplicity)` pairs with monic,
    /// squarefree, pairwise coprime factors.
    pub fn squarefree_decomposition(p: &QPoly) -> Vec<(QPoly, usize)> {
        let p = monic(p.clone());
        let dp = deriv(&p);
        let a0 = gcd(&p, &dp);
        let mut b = divrem(&p, &a0).0;
        let c = divrem(&dp, &a0).0;
        let mut d = sub(&c, &deriv(&b));
        let mut out = Vec::new();
        let mut i = 1;
        while b.len() > 1 {
            let a = gcd(&b, &d);
            let nb = divrem(&b, &a).0;
            let nc = divrem(&d, &a).0;
            d = sub(&nc, &deriv(&nb));
            if a.len() > 1 {
                out.push((a, i));
            }
            b = nb;
            i += 1;
        }
        out
    }
}

/// Durand–Kerner iteration on a monic polynomial (ascending coefficients).
fn durand_kerner(coeffs: &[f64], radius: f64) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    if deg == 1 {
        return Ok(vec![Complex64::new(-coeffs[0], 0.0)]);
    }
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    // equally spaced seeds, rotated off the real axis so that conjugate
    // symmetry of the seeds cannot trap the iteration on the real line
    let mut z: Vec<Complex64> =
        (0..deg).map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / deg as f64 + 0.4)).collect();
    for _ in 0..ROOT_MAX_ITER {
        let mut max_step: f64 = 0.0;
        for k in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != k {
                    denom *= z[k] - z[j];
                }
            }
            let step = eval(z[k]) / denom;
            z[k] -= step;
            max_step = max_step.max(step.norm() / z[k].norm().max(1.0));
        }
        if max_step <= ROOT_TOLERANCE {
            return Ok(z);
        }
    }
    let residual = z.iter().map(|&w| eval(w).norm()).fold(0.0, f64::max);
    Err(Error::NoConvergence { iterations: ROOT_MAX_ITER, residual })
}

/// Inverse zeros of `L` as roots of the reciprocal polynomial
/// `z^{2g} L(1/z) = sum_i b_i z^{2g - i}`.
///
/// Multiplicities come from an exact squarefree decomposition over Q; each
/// squarefree factor is then solved by Durand–Kerner.
pub fn inverse_zeros(l: &LPolynomial) -> Result<InverseZeroSet> {
    let g = l.g;
    let sqrt_q = (l.q as f64).sqrt();
    if g == 0 {
        return Ok(InverseZeroSet { q: l.q, gamma: vec![], theta: vec![], multiplicity: vec![], simple: true });
    }
    let recip: Vec<Rational> = l.b.iter().rev().map(|c| Rational::from(c)).collect();
    let mut roots: Vec<(Complex64, usize)> = Vec::new();
    for (factor, mult) in qpoly::squarefree_decomposition(&recip) {
        let coeffs: Vec<f64> = factor.iter().map(|c| c.to_f64()).collect();
        for z in durand_kerner(&coeffs, sqrt_q)? {
            roots.push((z, mult));
        }
    }
    for i in 0..roots.len() {
        for j in 0..i {
            if (roots[i].0 - roots[j].0).norm() < ROOT_CLUSTER {
                // distinct factors are coprime, so this is numerical failure
                return Err(Error::NoConvergence { iterations: ROOT_MAX_ITER, residual: ROOT_CLUSTER });
            }
        }
    }
    let deviation = roots.iter().map(|(z, _)| (z.norm() - sqrt_q).abs()).fold(0.0, f64::max);
    if deviation > RH_TOLERANCE {
        return Err(Error::RhViolation { deviation });
    }
    let imag_tol = 1e-9 * sqrt_q;
    let mut primary: Vec<(Complex64, usize)> = Vec::new();
    for &(z, mult) in &roots {
        if z.im.abs() <= imag_tol {
            let z = Complex64::new(z.re, 0.0);
            if mult % 2 != 0 {
                return Err(Error::InvalidArgument(format!("real inverse zero {} of odd multiplicity", z.re)));
            }
            primary.extend(std::iter::repeat_n((z, mult), mult / 2));
        } else if z.im > 0.0 {
            primary.extend(std::iter::repeat_n((z, mult), mult));
        }
    }
    if primary.len() != g {
        return Err(Error::NoConvergence { iterations: ROOT_MAX_ITER, residual: f64::NAN });
    }
    primary.sort_by(|a, b| a.0.arg().total_cmp(&b.0.arg()));
    let mut gamma: Vec<Complex64> = primary.iter().map(|p| p.0).collect();
    gamma.extend(primary.iter().map(|p| p.0.conj()));
    let mut multiplicity: Vec<usize> = primary.iter().map(|p| p.1).collect();
    multiplicity.extend(primary.iter().map(|p| p.1));
    let theta: Vec<f64> = gamma.iter().map(|z| z.im.atan2(z.re)).collect();
    let simple = multiplicity.iter().all(|&m| m == 1);
    Ok(InverseZeroSet { q: l.q, gamma, theta, multiplicity, simple })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked() -> LPolynomial {
        LPolynomial::new(5, 1, vec![Integer::from(1), Integer::from(-2), Integer::from(5)]).unwrap()
    }

    #[test]
    fn l_from_counts() {
        let counts = PointCounts::new(5, 1, vec![4]).unwrap();
        let l = l_polynomial(&counts).unwrap();
        assert_eq!(l, worked());
        assert_eq!(class_number(&l), 4);
    }

    #[test]
    fn zero_power_sums_give_trivial_l() {
        let counts = PointCounts::new(3, 2, vec![4, 10]).unwrap();
        let l = l_polynomial(&counts).unwrap();
        let b: Vec<i64> = l.coefficients().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(b, vec![1, 0, 0, 0, 9]);
    }

    #[test]
    fn inconsistent_counts_are_non_integral() {
        // S_1 = 1, S_2 = 0 gives b_2 = (S_1^2 - S_2)/2 = 1/2
        let counts = PointCounts::new(5, 2, vec![5, 26]).unwrap();
        assert_eq!(l_polynomial(&counts).unwrap_err(), Error::NonIntegral { what: "L-polynomial", index: 2 });
    }

    #[test]
    fn zeta_at_rational_points() {
        let l = worked();
        assert_eq!(zeta_eval_exact(&l, &Rational::from((1, 25))).unwrap(), Rational::from((29, 24)));
        assert_eq!(zeta_eval_exact(&l, &Rational::new()).unwrap(), 1);
        assert!(matches!(zeta_eval_exact(&l, &Rational::from(1)), Err(Error::PoleAt(_))));
        assert!(matches!(zeta_eval_exact(&l, &Rational::from((1, 5))), Err(Error::PoleAt(_))));
        assert!(matches!(zeta_eval(&l, Complex64::new(1.0, 0.0)), Err(Error::PoleAt(_))));
    }

    #[test]
    fn derivative_at_zero_and_by_finite_difference() {
        let l = worked();
        let d0 = zeta_derivative_at(&l, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(d0, Complex64::new(-2.0 + 1.0 + 5.0, 0.0));
        let u0 = Complex64::new(1.0, 2.0).inv();
        let d = zeta_derivative_at(&l, u0).unwrap();
        assert!(d.norm() > 1e-3);
        let h = 1e-6;
        let fd = (zeta_eval(&l, u0 + h).unwrap() - zeta_eval(&l, u0 - h).unwrap()) / (2.0 * h);
        assert!((fd - d).norm() / d.norm() < 1e-5);
    }

    #[test]
    fn worked_zeros() {
        let z = inverse_zeros(&worked()).unwrap();
        assert!(z.simple);
        assert!((z.gamma[0] - Complex64::new(1.0, 2.0)).norm() < 1e-12);
        assert!((z.gamma[1] - Complex64::new(1.0, -2.0)).norm() < 1e-12);
        assert!((z.theta[0] - 2f64.atan2(1.0)).abs() < 1e-12);
        assert!((z.theta[0] - 1.1071487).abs() < 1e-7);
        assert_eq!(z.theta[1], -z.theta[0]);
    }

    #[test]
    fn pure_imaginary_pair() {
        let l = LPolynomial::new(7, 1, vec![Integer::from(1), Integer::new(), Integer::from(7)]).unwrap();
        let z = inverse_zeros(&l).unwrap();
        assert!((z.theta[0] - PI / 2.0).abs() < 1e-12);
        assert!((z.gamma[0].im - 7f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn repeated_zeros_detected() {
        // (1 - a u + q u^2)^2 and a supersingular-type square with real zeros
        let l = LPolynomial::from_weil_factors(9, &[2, 2]).unwrap();
        let z = inverse_zeros(&l).unwrap();
        assert!(!z.simple);
        assert_eq!(z.multiplicity, vec![2, 2, 2, 2]);
        assert!(z.rh_deviation() < 1e-9);
        let l = LPolynomial::from_weil_factors(9, &[6, 6]).unwrap();
        let z = inverse_zeros(&l).unwrap();
        assert!(!z.simple);
        assert_eq!(z.theta[0], 0.0);
        let l = LPolynomial::from_weil_factors(9, &[-6, 1]).unwrap();
        let z = inverse_zeros(&l).unwrap();
        assert!((z.theta[1] - PI).abs() < 1e-12);
        assert!(!z.simple);
    }

    #[test]
    fn non_weil_polynomial_violates_rh() {
        // satisfies the functional equation but has |gamma| != sqrt(q)
        let l = LPolynomial::from_weil_factors(5, &[7]).unwrap();
        assert!(matches!(inverse_zeros(&l), Err(Error::RhViolation { .. })));
    }

    #[test]
    fn corrupted_functional_equation() {
        let b = vec![Integer::from(1), Integer::from(-2), Integer::from(6)];
        assert_eq!(LPolynomial::new(5, 1, b).unwrap_err(), Error::FunctionalEquation { index: 2 });
    }

    #[test]
    fn extended_counts_match_direct_count() {
        let l = worked();
        let n = l.point_counts_extended(4);
        assert_eq!(n[0], 4);
        assert_eq!(n[1], 32);
    }
}
