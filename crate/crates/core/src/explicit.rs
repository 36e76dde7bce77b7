//! Main terms, oscillatory error terms and their bounds.
//!
//! For simple inverse zeros the normalized error of `Q_k` is, up to a
//! decaying term,
//! `E(X) = -sum_{j,l} A_{j,l} exp(iX(theta_j + 2 pi l)/k)`
//! with `gamma_{j,l} = q^{1/2k} exp(i(theta_j + 2 pi l)/k)` and
//! `A_{j,l} = Z(1/gamma_{j,l}) / (k gamma_{j,l}^{1-k} Z'(1/gamma_j)) * gamma_{j,l}/(gamma_{j,l} - 1)`.
//! The totient has one term per zero with
//! `T_j = Z(q/gamma_j) / Z'(1/gamma_j) * gamma_j/(gamma_j - 1)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rug::float::Round;
use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::series::{Kind, SummatoryTable};
use crate::zeta::{
    class_number, inverse_zeros, qpow, zeta_derivative_at, zeta_eval, zeta_eval_exact, InverseZeroSet, LPolynomial,
};

/// Working precision (bits) for exact-to-float conversions and the
/// high-precision residual check.
pub const HIGH_PRECISION: u32 = 256;

/// Leading term `MT(X) = d * base^X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainTermConstants {
    pub kind: Kind,
    pub d: Rational,
    pub base: Integer,
}

impl MainTermConstants {
    /// Exact `d * base^X`.
    pub fn value(&self, x: usize) -> Rational {
        Rational::from(&self.d * self.base.clone().pow(x as u32))
    }

    /// Main terms of the polynomial ring `F_q[x]` (finite places of the
    /// projective line), matching the genus-0 closed forms.
    pub fn genus0_finite(q: u64, kind: Kind) -> Result<Self> {
        let kind = kind.validate()?;
        let qr = Rational::from(q);
        Ok(match kind {
            Kind::Kfree(k) => {
                // (1 - q^{1-k}) / (q - 1)
                let d = (Rational::from(1) - Rational::from((1, qpow(q, k - 1)))) / (qr - 1u32);
                Self { kind, d, base: Integer::from(q) }
            }
            Kind::Totient => {
                let d = Rational::from((1, Integer::from(q) * (q + 1)));
                Self { kind, d, base: Integer::from(q) * q }
            }
        })
    }
}

impl Serialize for MainTermConstants {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("MainTermConstants", 4)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("d", &self.d.to_string())?;
        st.serialize_field("d_float", &self.d.to_f64())?;
        st.serialize_field("base", &self.base.to_string())?;
        st.end()
    }
}

/// Main term of `Q_k` or `F_Phi` for a curve.
///
/// k-free: `d = q^{1-g} h / (zeta(k) (q-1)^2)`, base `q`.
/// totient: `d = q^{-g} h / (zeta(2) (1 - 1/q) (q^2 - 1))`, base `q^2`.
pub fn main_term(l: &LPolynomial, kind: Kind) -> Result<MainTermConstants> {
    let kind = kind.validate()?;
    let q = l.q();
    let g = l.genus() as u32;
    let h = Rational::from(class_number(l));
    let qr = Rational::from(q);
    let q_pow_g = Rational::from(qpow(q, g));
    Ok(match kind {
        Kind::Kfree(k) => {
            let zeta_k = zeta_eval_exact(l, &Rational::from((1, qpow(q, k))))?;
            let qm1 = Rational::from(q - 1);
            let d = qr * h / q_pow_g / zeta_k / Rational::from(&qm1 * &qm1);
            MainTermConstants { kind, d, base: Integer::from(q) }
        }
        Kind::Totient => {
            let zeta_2 = zeta_eval_exact(l, &Rational::from((1, qpow(q, 2))))?;
            let one_minus_inv = Rational::from(1) - Rational::from((1, q));
            let q2m1 = Rational::from(q * q - 1);
            let d = h / q_pow_g / zeta_2 / one_minus_inv / q2m1;
            MainTermConstants { kind, d, base: Integer::from(q) * q }
        }
    })
}

/// Everything needed to evaluate the oscillatory error term of one curve.
#[derive(Debug, Clone)]
pub struct ErrorTermModel {
    pub kind: Kind,
    pub l: LPolynomial,
    pub zeros: InverseZeroSet,
    /// `Z'(1/gamma_j)`, `j = 0..2g`.
    pub zeta_prime: Vec<Complex64>,
    /// `grid[j][l] = gamma_{j,l}`; for the totient `grid[j] = [gamma_j]`.
    pub grid: Vec<Vec<Complex64>>,
    /// `amplitudes[j][l] = A_{j,l}`; for the totient `[T_j]`.
    pub amplitudes: Vec<Vec<Complex64>>,
    /// `sigma[t][j]`, `t = 0..k`; for the totient a single row of `T_j`.
    pub sigma: Vec<Vec<Complex64>>,
    /// `c[j][a]` (k-free only).
    pub c: Vec<Vec<Complex64>>,
}

impl ErrorTermModel {
    pub fn q(&self) -> u64 {
        self.l.q()
    }

    pub fn genus(&self) -> usize {
        self.l.genus()
    }

    pub fn period(&self) -> u32 {
        self.kind.period()
    }

    /// `sum |amplitudes|`, the triangle-inequality bound on `|E|`.
    pub fn total_amplitude(&self) -> f64 {
        self.amplitudes.iter().flatten().map(|a| a.norm()).sum()
    }

    /// `E(X)` through the residue-class coefficients:
    /// `-sum_j sigma_{X mod k, j} exp(iX theta_j / k)`, real part.
    pub fn eval(&self, x: u64) -> f64 {
        let k = self.period() as u64;
        let row = &self.sigma[(x % k) as usize];
        let g = self.genus();
        // conjugate pairs contribute twice the real part of the primary half
        let mut s = 0.0;
        for j in 0..g {
            let phase = phase_of(x, self.zeros.theta[j], k);
            s += (row[j] * Complex64::from_polar(1.0, phase)).re;
        }
        -2.0 * s
    }
}

/// `X * theta / k`.
fn phase_of(x: u64, theta: f64, k: u64) -> f64 {
    (x as f64) * theta / k as f64
}

impl Serialize for ErrorTermModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ErrorTermModel", 8)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("L", &self.l)?;
        st.serialize_field("zeros", &self.zeros)?;
        st.serialize_field("zeta_prime", &self.zeta_prime)?;
        st.serialize_field("grid", &self.grid)?;
        st.serialize_field("amplitudes", &self.amplitudes)?;
        st.serialize_field("sigma", &self.sigma)?;
        st.serialize_field("c", &self.c)?;
        st.end()
    }
}

fn require_simple(zeros: &InverseZeroSet) -> Result<()> {
    if zeros.simple {
        Ok(())
    } else {
        Err(Error::NonSimpleZeros { multiplicities: zeros.multiplicity_report() })
    }
}

/// Builds the oscillatory model from `L` and its zeros.
pub fn build_model(l: &LPolynomial, zeros: &InverseZeroSet, kind: Kind) -> Result<ErrorTermModel> {
    let kind = kind.validate()?;
    require_simple(zeros)?;
    let q = l.q() as f64;
    let two_g = zeros.gamma.len();
    let zeta_prime: Vec<Complex64> =
        zeros.gamma.iter().map(|&g| zeta_derivative_at(l, g.inv())).collect::<Result<_>>()?;
    let (grid, amplitudes, sigma, c) = match kind {
        Kind::Kfree(k) => {
            let kf = k as f64;
            let r = q.powf(1.0 / (2.0 * kf));
            let mut grid = Vec::with_capacity(two_g);
            let mut amps = Vec::with_capacity(two_g);
            let mut c = Vec::with_capacity(two_g);
            for j in 0..two_g {
                let gj: Vec<Complex64> =
                    (0..k).map(|ell| Complex64::from_polar(r, (zeros.theta[j] + 2.0 * PI * ell as f64) / kf)).collect();
                let mut aj = Vec::with_capacity(k as usize);
                let mut zj = Vec::with_capacity(k as usize);
                for &gl in &gj {
                    // Z(1/gamma_{j,l}) / (gamma_{j,l} - 1)
                    let z = zeta_eval(l, gl.inv())? / (gl - 1.0);
                    zj.push(z);
                    aj.push(z * gl / (kf * gl.powi(1 - k as i32) * zeta_prime[j]));
                }
                let cj: Vec<Complex64> = (0..k)
                    .map(|a| {
                        zj.iter()
                            .enumerate()
                            .map(|(ell, &z)| z * root_of_unity(ell as u64 * a as u64, k as u64))
                            .sum::<Complex64>()
                            / kf
                    })
                    .collect();
                grid.push(gj);
                amps.push(aj);
                c.push(cj);
            }
            let sigma: Vec<Vec<Complex64>> = (0..k)
                .map(|t| {
                    (0..two_g)
                        .map(|j| {
                            amps[j]
                                .iter()
                                .enumerate()
                                .map(|(ell, &a)| a * root_of_unity(ell as u64 * t as u64, k as u64))
                                .sum()
                        })
                        .collect()
                })
                .collect();
            (grid, amps, sigma, c)
        }
        Kind::Totient => {
            let mut grid = Vec::with_capacity(two_g);
            let mut amps = Vec::with_capacity(two_g);
            for j in 0..two_g {
                let gj = zeros.gamma[j];
                let t = zeta_eval(l, q / gj)? / zeta_prime[j] * gj / (gj - 1.0);
                grid.push(vec![gj]);
                amps.push(vec![t]);
            }
            let sigma = vec![amps.iter().map(|a| a[0]).collect()];
            (grid, amps, sigma, Vec::new())
        }
    };
    Ok(ErrorTermModel { kind, l: l.clone(), zeros: zeros.clone(), zeta_prime, grid, amplitudes, sigma, c })
}

/// Convenience: zeros plus model.
pub fn model_for(l: &LPolynomial, kind: Kind) -> Result<ErrorTermModel> {
    build_model(l, &inverse_zeros(l)?, kind)
}

/// `exp(2 pi i n / k)` with `n` reduced mod `k` first.
fn root_of_unity(n: u64, k: u64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (n % k) as f64 / k as f64)
}

/// `E(X)` from the defining double sum; the imaginary part must vanish.
pub fn oscillatory_sum(model: &ErrorTermModel, x: u64) -> Result<f64> {
    let k = model.period() as u64;
    let mut s = Complex64::new(0.0, 0.0);
    for (j, row) in model.amplitudes.iter().enumerate() {
        let base = phase_of(x, model.zeros.theta[j], k);
        for (ell, &a) in row.iter().enumerate() {
            // exp(iX(theta + 2 pi l)/k) with the l-part reduced exactly
            s += a * Complex64::from_polar(1.0, base) * root_of_unity(ell as u64 * x, k);
        }
    }
    let tol = 1e-9 * model.total_amplitude().max(1.0);
    if s.im.abs() > tol {
        return Err(Error::ImaginaryResidue { x, imag: s.im });
    }
    Ok(-s.re)
}

/// Where a normalized error value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleSource {
    Exact,
    Model,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedErrorSample {
    pub x: u64,
    pub r_tilde: f64,
    pub source: SampleSource,
}

/// `q^{X/2k}` (k-free) or `q^{X/2}` (totient) as a high-precision float.
fn scale_float(q: u64, x: usize, period: u32) -> Float {
    let exponent = Float::with_val(HIGH_PRECISION, x) / (2 * period);
    Float::with_val(HIGH_PRECISION, q).pow(exponent)
}

/// Exact `R(X) = T[X] - MT(X)`.
pub fn exact_error(table: &SummatoryTable, mt: &MainTermConstants, x: usize) -> Result<Rational> {
    Ok(Rational::from(table.get(x)?) - mt.value(x))
}

/// `R~(X)` from an exact table; the subtraction is exact and only the
/// final quotient is rounded.
pub fn normalized_error(table: &SummatoryTable, mt: &MainTermConstants, x: usize) -> Result<NormalizedErrorSample> {
    let r = exact_error(table, mt, x)?;
    let rf = Float::with_val(HIGH_PRECISION, &r) / scale_float(table.q, x, mt.kind.period());
    Ok(NormalizedErrorSample { x: x as u64, r_tilde: rf.to_f64_round(Round::Nearest), source: SampleSource::Exact })
}

/// `E(X)` wrapped as a sample.
pub fn model_sample(model: &ErrorTermModel, x: u64) -> Result<NormalizedErrorSample> {
    Ok(NormalizedErrorSample { x, r_tilde: oscillatory_sum(model, x)?, source: SampleSource::Model })
}

/// Outcome of the constancy check of `R(X) - Osc(X)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub epsilon: f64,
    pub max_dev: f64,
    pub x_min: usize,
    pub x_max: usize,
    /// `epsilon(X)` per X, for plotting.
    pub residuals: Vec<f64>,
}

/// High-precision copies of the zeros and amplitudes of a model.
struct PreciseTerms {
    /// `(amplitude, base)` so that `Osc(X) = -sum amplitude * base^X`.
    terms: Vec<(Complex, Complex)>,
}

fn horner_mp(coeffs: &[Integer], u: &Complex) -> Complex {
    let mut acc = Complex::with_val(HIGH_PRECISION, 0);
    for c in coeffs.iter().rev() {
        acc *= u;
        acc += c;
    }
    acc
}

fn zeta_mp(l: &LPolynomial, u: &Complex) -> Complex {
    let q = l.q();
    let one_minus_u = Complex::with_val(HIGH_PRECISION, 1) - u;
    let one_minus_qu = Complex::with_val(HIGH_PRECISION, 1) - Complex::with_val(HIGH_PRECISION, u * q);
    horner_mp(l.coefficients(), u) / (one_minus_u * one_minus_qu)
}

fn zeta_prime_mp(l: &LPolynomial, u: &Complex) -> Complex {
    let q = Integer::from(l.q());
    let b = l.coefficients();
    let lp: Vec<Integer> = b.iter().enumerate().skip(1).map(|(i, c)| Integer::from(i) * c).collect();
    let d = [Integer::from(1), -Integer::from(&q + 1), q.clone()];
    let dd = [-Integer::from(&q + 1), Integer::from(2) * &q];
    let lv = horner_mp(b, u);
    let lpv = horner_mp(&lp, u);
    let dv = horner_mp(&d, u);
    let ddv = horner_mp(&dd, u);
    let num = Complex::with_val(HIGH_PRECISION, &lpv * &dv) - Complex::with_val(HIGH_PRECISION, &lv * &ddv);
    let d2 = Complex::with_val(HIGH_PRECISION, &dv * &dv);
    num / d2
}

/// Newton refinement of a simple root of `z^{2g} L(1/z)`.
fn polish_root(l: &LPolynomial, z0: Complex64) -> Complex {
    let recip: Vec<Integer> = l.coefficients().iter().rev().cloned().collect();
    let deriv: Vec<Integer> = recip.iter().enumerate().skip(1).map(|(i, c)| Integer::from(i) * c).collect();
    let mut z = Complex::with_val(HIGH_PRECISION, (z0.re, z0.im));
    for _ in 0..12 {
        let step = horner_mp(&recip, &z) / horner_mp(&deriv, &z);
        z -= step;
    }
    z
}

impl PreciseTerms {
    fn new(model: &ErrorTermModel) -> Self {
        let l = &model.l;
        let q = l.q();
        let g = model.genus();
        let mut gamma: Vec<Complex> = (0..g).map(|j| polish_root(l, model.zeros.gamma[j])).collect();
        let conj: Vec<Complex> = gamma.iter().map(|z| z.clone().conj()).collect();
        gamma.extend(conj);
        let pi = Float::with_val(HIGH_PRECISION, rug::float::Constant::Pi);
        let mut terms = Vec::new();
        for gj in &gamma {
            let inv = Complex::with_val(HIGH_PRECISION, gj.recip_ref());
            let zp = zeta_prime_mp(l, &inv);
            match model.kind {
                Kind::Kfree(k) => {
                    let theta = Float::with_val(HIGH_PRECISION, gj.arg_ref());
                    let r = Float::with_val(HIGH_PRECISION, q).pow(Float::with_val(HIGH_PRECISION, 1) / (2 * k));
                    for ell in 0..k {
                        let angle = (Float::with_val(HIGH_PRECISION, &pi * (2 * ell)) + &theta) / k;
                        let unit = Complex::with_val(HIGH_PRECISION, (Float::with_val(HIGH_PRECISION, 0), angle)).exp();
                        let gl = unit * &r;
                        let gl_inv = Complex::with_val(HIGH_PRECISION, gl.recip_ref());
                        let z = zeta_mp(l, &gl_inv);
                        // A = Z(1/g_l) g_l^k / (k Z'(1/g_j) (g_l - 1)), using g_l^{1-k} = g_l / g_l^k
                        let glk = Complex::with_val(HIGH_PRECISION, (&gl).pow(k));
                        let denom = Complex::with_val(HIGH_PRECISION, &zp * k)
                            * (Complex::with_val(HIGH_PRECISION, &gl - 1u32));
                        let amp = z * glk / denom;
                        terms.push((amp, gl));
                    }
                }
                Kind::Totient => {
                    let qu = Complex::with_val(HIGH_PRECISION, &inv * q);
                    let z = zeta_mp(l, &qu);
                    let amp = z / &zp * gj / Complex::with_val(HIGH_PRECISION, gj - 1u32);
                    terms.push((amp, gj.clone()));
                }
            }
        }
        Self { terms }
    }

    /// Real part of `-sum amplitude * base^X`.
    fn osc(&self, x: usize) -> Float {
        let mut s = Complex::with_val(HIGH_PRECISION, 0);
        for (a, b) in &self.terms {
            let p = Complex::with_val(HIGH_PRECISION, b.pow(x as u32));
            s += Complex::with_val(HIGH_PRECISION, a * &p);
        }
        -Float::with_val(HIGH_PRECISION, s.real())
    }
}

/// Checks that `R(X) - Osc(X)` does not depend on `X`, where
/// `Osc(X) = -sum A gamma_{j,l}^X` is the unnormalized oscillatory sum.
///
/// Both sides are evaluated at 256-bit precision: at `X = 40` the
/// individual terms exceed `10^20` while the residual is of order one.
pub fn residual_constant(
    table: &SummatoryTable,
    mt: &MainTermConstants,
    model: &ErrorTermModel,
    xs: std::ops::RangeInclusive<usize>,
) -> Result<ResidualReport> {
    if table.kind != model.kind || mt.kind != model.kind {
        return Err(Error::InvalidArgument("table, main term and model kinds differ".into()));
    }
    let (x_min, x_max) = (*xs.start(), *xs.end());
    if x_min == 0 || x_max > table.xmax() || x_min > x_max {
        return Err(Error::OutOfRange { x: x_max, max: table.xmax() });
    }
    let precise = PreciseTerms::new(model);
    let mut eps = Vec::with_capacity(x_max - x_min + 1);
    for x in xs {
        let r = Float::with_val(HIGH_PRECISION, &exact_error(table, mt, x)?);
        eps.push(r - precise.osc(x));
    }
    let n = eps.len() as u32;
    let mean = eps.iter().fold(Float::with_val(HIGH_PRECISION, 0), |acc, e| acc + e) / n;
    let max_dev = eps.iter().map(|e| Float::with_val(HIGH_PRECISION, e - &mean).abs().to_f64()).fold(0.0, f64::max);
    let epsilon = mean.to_f64();
    let report = ResidualReport { epsilon, max_dev, x_min, x_max, residuals: eps.iter().map(|e| e.to_f64()).collect() };
    if max_dev >= 1e-6 * epsilon.abs() + 1e-9 {
        return Err(Error::NonConstantResidual { epsilon, max_dev });
    }
    Ok(report)
}

/// `B_k = max_a sum_j |c_{j,a} gamma_j / Z'(1/gamma_j)|` and its maximizing
/// residue `a`.
///
/// Under linear independence of the angles this is the lim sup of `|E|`;
/// without it, it is still the triangle-inequality upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KfreeBound {
    pub b: f64,
    pub argmax_a: u32,
}

fn class_sum(model: &ErrorTermModel, a: usize) -> f64 {
    (0..model.zeros.gamma.len()).map(|j| (model.c[j][a] * model.zeros.gamma[j] / model.zeta_prime[j]).norm()).sum()
}

pub fn bound_kfree(model: &ErrorTermModel) -> Result<KfreeBound> {
    let Kind::Kfree(k) = model.kind else {
        return Err(Error::InvalidArgument("bound_kfree needs a k-free model".into()));
    };
    let mut best = KfreeBound { b: f64::NEG_INFINITY, argmax_a: 0 };
    for a in 0..k {
        let b = class_sum(model, a as usize);
        if b > best.b {
            best = KfreeBound { b, argmax_a: a };
        }
    }
    Ok(best)
}

/// `B_Phi = sum_j |T_j|`.
pub fn bound_totient(model: &ErrorTermModel) -> Result<f64> {
    if model.kind != Kind::Totient {
        return Err(Error::InvalidArgument("bound_totient needs a totient model".into()));
    }
    Ok(model.amplitudes.iter().map(|a| a[0].norm()).sum())
}

/// Bound restricted to `X ≡ a (mod k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidueClassBound {
    pub a: u32,
    pub b_a: f64,
    /// `b` with `a - 2g ≡ b (mod k)`.
    pub b: u32,
    /// `B_a / ((b + 1) q^{g - g/k - 1/2 - b/2k})` when `b <= k - 2`.
    pub b_a_normalized: Option<f64>,
    /// Set for `b = k - 1`, where no normalization is defined.
    pub flagged: bool,
}

pub fn bound_residue_class(model: &ErrorTermModel, a: u32) -> Result<ResidueClassBound> {
    let Kind::Kfree(k) = model.kind else {
        return Err(Error::InvalidArgument("residue classes need a k-free model".into()));
    };
    if a >= k {
        return Err(Error::InvalidArgument(format!("residue {a} not in 0..{k}")));
    }
    let g = model.genus() as i64;
    let b_a = class_sum(model, a as usize);
    let b = (a as i64 - 2 * g).rem_euclid(k as i64) as u32;
    let (b_a_normalized, flagged) = if b + 1 < k {
        let (gf, kf, bf) = (g as f64, k as f64, b as f64);
        let e = gf - gf / kf - 0.5 - bf / (2.0 * kf);
        (Some(b_a / ((bf + 1.0) * (model.q() as f64).powf(e))), false)
    } else {
        (None, true)
    };
    Ok(ResidueClassBound { a, b_a, b, b_a_normalized, flagged })
}

/// Renormalized bounds `B~_k = B_k / q^{g - g/k - 1/2}` and
/// `B~_Phi = B_Phi / q^{2g - 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedBounds {
    pub btilde_kfree: Option<f64>,
    pub btilde_totient: Option<f64>,
}

/// Normalized bound of a single model.
pub fn normalized_bound(model: &ErrorTermModel) -> Result<f64> {
    let q = model.q() as f64;
    let g = model.genus() as f64;
    match model.kind {
        Kind::Kfree(k) => {
            let k = k as f64;
            Ok(bound_kfree(model)?.b / q.powf(g - g / k - 0.5))
        }
        Kind::Totient => Ok(bound_totient(model)? / q.powf(2.0 * g - 2.0)),
    }
}

/// Both normalizations for a curve; the k-free one uses `k`.
pub fn global_normalizations(l: &LPolynomial, zeros: &InverseZeroSet, k: u32) -> Result<NormalizedBounds> {
    let kf = build_model(l, zeros, Kind::Kfree(k))?;
    let tot = build_model(l, zeros, Kind::Totient)?;
    Ok(NormalizedBounds { btilde_kfree: Some(normalized_bound(&kf)?), btilde_totient: Some(normalized_bound(&tot)?) })
}
