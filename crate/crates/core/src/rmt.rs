//! Eigenangle statistics of Haar-random matrices in `USp(2g)`.
//!
//! A spectrum is stored by its primary half `theta_1..theta_g` in `[0, pi]`;
//! the full spectrum is `{theta_j} ∪ {-theta_j}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limit::{batches, stream_rng};
use crate::zeta::InverseZeroSet;

/// Largest genus accepted by the rejection sampler.
pub const MAX_HAAR_GENUS: usize = 4;

/// Gap below which two angles of the full spectrum count as equal.
pub const ANGLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpectrumOrigin {
    HaarSample { seed: u64, index: u64 },
    Frobenius { curve: String },
    Given,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleSpectrum {
    pub theta: Vec<f64>,
    pub origin: SpectrumOrigin,
    /// Set when the source had repeated inverse zeros.
    pub repeated: bool,
}

impl AngleSpectrum {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if let Some(t) = theta.iter().find(|t| !(0.0..=PI).contains(*t)) {
            return Err(Error::InvalidArgument(format!("angle {t} outside [0, pi]")));
        }
        Ok(Self { theta, origin: SpectrumOrigin::Given, repeated: false })
    }

    /// `(2j - 1) pi / 2g`, `j = 1..g`, where `phi` attains its minimum.
    pub fn quantized(g: usize) -> Self {
        let theta = (1..=g).map(|j| (2 * j - 1) as f64 * PI / (2 * g) as f64).collect();
        Self { theta, origin: SpectrumOrigin::Given, repeated: false }
    }

    pub fn genus(&self) -> usize {
        self.theta.len()
    }

    /// All `2g` angles: the primary half followed by its negatives.
    pub fn full(&self) -> Vec<f64> {
        self.theta.iter().copied().chain(self.theta.iter().map(|t| -t)).collect()
    }
}

/// Weyl density of the eigenangles on `[0, pi]^g`:
/// `2^{g^2}/(g! pi^g) prod_{m<n} (cos t_n - cos t_m)^2 prod_l sin^2 t_l`.
pub fn weyl_density(theta: &[f64]) -> f64 {
    let g = theta.len();
    let mut norm = 2f64.powi((g * g) as i32) / PI.powi(g as i32);
    for i in 2..=g {
        norm /= i as f64;
    }
    norm * weyl_shape(theta)
}

fn weyl_shape(theta: &[f64]) -> f64 {
    let c: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let mut v: f64 = theta.iter().map(|t| t.sin().powi(2)).product();
    for n in 0..c.len() {
        for m in 0..n {
            v *= (c[n] - c[m]).powi(2);
        }
    }
    v
}

/// `max prod_{m<n} (x_n - x_m)^2` over `[-1, 1]^g`, attained at `±1` and
/// the zeros of `P'_{g-1}`.
const VANDERMONDE_MAX: [f64; MAX_HAAR_GENUS + 1] = [1.0, 1.0, 4.0, 4.0, 1.31072];

/// Acceptance probability of a proposal drawn from `prod_l (2/pi) sin^2`:
/// the squared Vandermonde of the cosines over its maximum.
pub fn acceptance(theta: &[f64]) -> f64 {
    let c: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let mut v = 1.0;
    for n in 0..c.len() {
        for m in 0..n {
            v *= (c[n] - c[m]).powi(2);
        }
    }
    v / VANDERMONDE_MAX[theta.len()]
}

fn check_genus(g: usize) -> Result<()> {
    if g == 0 || g > MAX_HAAR_GENUS {
        return Err(Error::GenusTooLarge(g));
    }
    Ok(())
}

/// Angle with density `(2/pi) sin^2`: its cosine is semicircular, i.e. the
/// abscissa of a uniform point of the unit disc.
fn sin2_angle<R: Rng>(rng: &mut R) -> f64 {
    let r = rng.random::<f64>().sqrt();
    (r * (std::f64::consts::TAU * rng.random::<f64>()).cos()).clamp(-1.0, 1.0).acos()
}

fn draw<R: Rng>(rng: &mut R, buf: &mut [f64]) {
    loop {
        for t in buf.iter_mut() {
            *t = sin2_angle(rng);
        }
        if rng.random::<f64>() < acceptance(buf) {
            return;
        }
    }
}

/// One Haar sample, from stream 0 of `seed`.
pub fn sample_haar_angles(g: usize, seed: u64) -> Result<AngleSpectrum> {
    check_genus(g)?;
    let mut rng = stream_rng(seed, 0);
    let mut theta = vec![0.0; g];
    draw(&mut rng, &mut theta);
    Ok(AngleSpectrum { theta, origin: SpectrumOrigin::HaarSample { seed, index: 0 }, repeated: false })
}

/// `n` Haar samples mapped through `f`, in a thread-count independent order.
pub fn haar_map<T, F>(g: usize, n: u64, seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[f64]) -> T + Sync,
{
    check_genus(g)?;
    let chunks: Vec<Vec<T>> = batches(n, g as u64)
        .into_par_iter()
        .map(|(stream, m)| {
            let mut rng = stream_rng(seed, stream);
            let mut theta = vec![0.0; g];
            (0..m)
                .map(|_| {
                    draw(&mut rng, &mut theta);
                    f(&theta)
                })
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// `n` Haar spectra.
pub fn haar_samples(g: usize, n: u64, seed: u64) -> Result<Vec<AngleSpectrum>> {
    let raw = haar_map(g, n, seed, |t| t.to_vec())?;
    Ok(raw
        .into_iter()
        .enumerate()
        .map(|(i, theta)| AngleSpectrum {
            theta,
            origin: SpectrumOrigin::HaarSample { seed, index: i as u64 },
            repeated: false,
        })
        .collect())
}

/// `|Z'_U(theta_j)| = prod_{m != j} 2|sin((theta_m - theta_j)/2)|` over the
/// full spectrum; `j` indexes the full spectrum.
pub fn char_poly_derivative_abs(spec: &AngleSpectrum, j: usize) -> Result<f64> {
    derivative_abs(&spec.full(), j)
}

fn derivative_abs(full: &[f64], j: usize) -> Result<f64> {
    if j >= full.len() {
        return Err(Error::InvalidArgument(format!("index {j} outside spectrum of size {}", full.len())));
    }
    let mut p = 1.0;
    for (m, &t) in full.iter().enumerate() {
        if m == j {
            continue;
        }
        let factor = 2.0 * ((t - full[j]) / 2.0).sin().abs();
        if factor < ANGLE_EPS {
            return Err(Error::RepeatedAngle { index: j });
        }
        p *= factor;
    }
    Ok(p)
}

/// `phi(U) = sum_j 1/|Z'_U(theta_j)|` over the full spectrum.
pub fn phi(spec: &AngleSpectrum) -> Result<f64> {
    phi_angles(&spec.theta)
}

/// [`phi`] on a bare primary half.
pub fn phi_angles(theta: &[f64]) -> Result<f64> {
    let full: Vec<f64> = theta.iter().copied().chain(theta.iter().map(|t| -t)).collect();
    let mut s = 0.0;
    for j in 0..full.len() {
        s += 1.0 / derivative_abs(&full, j)?;
    }
    Ok(s)
}

/// `phi*(U) = sum_j |k - e^{i theta_j} x| / |Z'_U(theta_j)|` with
/// `x = sum_m e^{-i theta_m}`.
pub fn phi_star(spec: &AngleSpectrum, k: u32) -> Result<f64> {
    let full = spec.full();
    let x: Complex64 = full.iter().map(|&t| Complex64::from_polar(1.0, -t)).sum();
    let mut s = 0.0;
    for (j, &t) in full.iter().enumerate() {
        let num = (Complex64::new(k as f64, 0.0) - Complex64::from_polar(1.0, t) * x).norm();
        s += num / derivative_abs(&full, j)?;
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaarEstimate {
    pub g: usize,
    pub beta: f64,
    pub mu: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// `phi` on `n` Haar samples; a repeated angle (probability zero) gives
/// `+inf`.
pub fn haar_phi_values(g: usize, n: u64, seed: u64) -> Result<Vec<f64>> {
    haar_map(g, n, seed, |t| phi_angles(t).unwrap_or(f64::INFINITY))
}

/// Monte Carlo estimates of `mu(phi <= beta)` for several `beta` from one
/// set of samples.
pub fn haar_probabilities(g: usize, betas: &[f64], samples: u64, seed: u64) -> Result<Vec<HaarEstimate>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let values = haar_phi_values(g, samples, seed)?;
    Ok(betas.iter().map(|&beta| estimate(g, beta, &values, seed)).collect())
}

fn estimate(g: usize, beta: f64, values: &[f64], seed: u64) -> HaarEstimate {
    let n = values.len() as f64;
    let hits = values.iter().filter(|&&v| v <= beta).count() as f64;
    let mu = hits / n;
    HaarEstimate { g, beta, mu, stderr: (mu * (1.0 - mu) / n).sqrt(), samples: values.len() as u64, seed }
}

pub fn haar_probability_phi(g: usize, beta: f64, samples: u64, seed: u64) -> Result<HaarEstimate> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    Ok(haar_probabilities(g, &[beta], samples, seed)?.remove(0))
}

/// Unitarized Frobenius angles `theta_j = arg(gamma_j)`, `j = 1..g`.
pub fn frobenius_angles(zeros: &InverseZeroSet, curve: impl Into<String>) -> AngleSpectrum {
    let g = zeros.genus();
    AngleSpectrum {
        theta: zeros.theta[..g].iter().map(|t| t.clamp(0.0, PI)).collect(),
        origin: SpectrumOrigin::Frobenius { curve: curve.into() },
        repeated: !zeros.simple,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::{inverse_zeros, LPolynomial};

    #[test]
    fn weyl_zeros() {
        assert_eq!(weyl_density(&[0.0, 1.0]), 0.0);
        assert_eq!(weyl_density(&[0.7, 0.7]), 0.0);
        assert!((weyl_density(&[PI / 2.0]) - 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn quantized_minimum() {
        for g in 1..=3 {
            assert!((phi(&AngleSpectrum::quantized(g)).unwrap() - 1.0).abs() < 1e-12, "g={g}");
        }
        let s = AngleSpectrum::new(vec![PI / 2.0]).unwrap();
        assert!((char_poly_derivative_abs(&s, 0).unwrap() - 2.0).abs() < 1e-15);
        assert!((phi_star(&s, 2).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn repeated_angles_rejected() {
        let s = AngleSpectrum::new(vec![0.5, 0.5]).unwrap();
        assert!(matches!(phi(&s), Err(Error::RepeatedAngle { .. })));
        let s = AngleSpectrum::new(vec![0.0]).unwrap();
        assert!(matches!(phi(&s), Err(Error::RepeatedAngle { .. })));
        assert!(AngleSpectrum::new(vec![4.0]).is_err());
    }

    #[test]
    fn phi_star_dominated_by_k() {
        let s = AngleSpectrum::new(vec![0.4, 2.2]).unwrap();
        let p = phi(&s).unwrap();
        let k = 1e8 as u32;
        assert!((phi_star(&s, k).unwrap() / k as f64 - p).abs() < 1e-6 * p);
    }

    #[test]
    fn sampler_limits() {
        assert!(matches!(sample_haar_angles(5, 1), Err(Error::GenusTooLarge(5))));
        let a = sample_haar_angles(2, 4).unwrap();
        assert_eq!(a, sample_haar_angles(2, 4).unwrap());
        assert!(a.theta.iter().all(|t| (0.0..=PI).contains(t)));
    }

    #[test]
    fn acceptance_bounded_by_one() {
        let fekete = [
            vec![0.0],
            vec![0.0, PI],
            vec![0.0, PI / 2.0, PI],
            vec![0.0, 0.2f64.sqrt().acos(), (-0.2f64.sqrt()).acos(), PI],
        ];
        for t in &fekete {
            assert!((acceptance(t) - 1.0).abs() < 1e-12, "{t:?}");
        }
        let mut rng = stream_rng(0, 0);
        for g in 1..=MAX_HAAR_GENUS {
            for _ in 0..20_000 {
                let t: Vec<f64> = (0..g).map(|_| PI * rng.random::<f64>()).collect();
                assert!(acceptance(&t) <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn worked_frobenius_angle() {
        let l = LPolynomial::from_weil_factors(5, &[2]).unwrap();
        let s = frobenius_angles(&inverse_zeros(&l).unwrap(), "q=5;f=0,1,0,1");
        assert!((s.theta[0] - 2f64.atan2(1.0)).abs() < 1e-12);
        assert!(!s.repeated);
    }
}
