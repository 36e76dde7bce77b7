//! Limiting distributions of the normalized error terms.
//!
//! The limiting measure is the pushforward of Lebesgue measure on the
//! torus `[0, 2pi)^g` under `theta -> sum_j 2|sigma_{t,j}| cos(theta_j)`,
//! averaged over `t = 0..k` for the k-free count.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::explicit::{normalized_error, ErrorTermModel, MainTermConstants};
use crate::series::{Kind, SummatoryTable};

/// Draws per batch; batches are the unit of parallel work, so results do
/// not depend on the thread count.
pub const BATCH: u64 = 1 << 16;

/// Largest `|z|` accepted by [`bessel_j0`].
pub const J0_DOMAIN: f64 = 60.0;

/// Reproducible generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Splits `n` draws into `(stream, count)` batches.
pub fn batches(n: u64, tag: u64) -> Vec<(u64, u64)> {
    let full = n / BATCH;
    let mut out: Vec<(u64, u64)> = (0..full).map(|b| ((tag << 32) | b, BATCH)).collect();
    if n % BATCH != 0 {
        out.push(((tag << 32) | full, n % BATCH));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorusDensityEstimate {
    pub kind: Kind,
    pub beta: f64,
    pub delta: f64,
    pub stderr: f64,
    /// Draws per torus.
    pub samples: u64,
    pub seed: u64,
    /// Fraction on each of the `k` tori (one entry for the totient).
    pub per_torus: Vec<f64>,
}

/// `2|sigma_{t,j}|` for `j = 0..g`, one row per torus.
pub fn torus_amplitudes(model: &ErrorTermModel) -> Vec<Vec<f64>> {
    let g = model.genus();
    model.sigma.iter().map(|row| row[..g].iter().map(|s| 2.0 * s.norm()).collect()).collect()
}

fn torus_value<R: Rng>(amps: &[f64], rng: &mut R) -> f64 {
    amps.iter().map(|a| a * (TAU * rng.random::<f64>()).cos()).sum()
}

fn count_hits(amps: &[f64], beta: f64, samples: u64, seed: u64, tag: u64) -> u64 {
    batches(samples, tag)
        .into_par_iter()
        .map(|(stream, n)| {
            let mut rng = stream_rng(seed, stream);
            (0..n).filter(|_| torus_value(amps, &mut rng).abs() <= beta).count() as u64
        })
        .collect::<Vec<u64>>()
        .iter()
        .sum()
}

/// Monte Carlo estimate of `delta(S(beta))`, the density of `X` with
/// `|R~(X)| <= beta`.
///
/// Torus `t` uses streams tagged `t`; the reported standard error combines
/// the `k` independent binomial estimates.
pub fn torus_density(model: &ErrorTermModel, beta: f64, samples: u64, seed: u64) -> Result<TorusDensityEstimate> {
    if !(beta > 0.0) {
        return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
    }
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let amps = torus_amplitudes(model);
    let k = amps.len() as f64;
    let per_torus: Vec<f64> = amps
        .iter()
        .enumerate()
        .map(|(t, a)| count_hits(a, beta, samples, seed, t as u64) as f64 / samples as f64)
        .collect();
    let delta = per_torus.iter().sum::<f64>() / k;
    let var: f64 = per_torus.iter().map(|p| p * (1.0 - p) / samples as f64).sum::<f64>() / (k * k);
    Ok(TorusDensityEstimate { kind: model.kind, beta, delta, stderr: var.sqrt(), samples, seed, per_torus })
}

pub fn density_kfree(model: &ErrorTermModel, beta: f64, samples: u64, seed: u64) -> Result<TorusDensityEstimate> {
    if !matches!(model.kind, Kind::Kfree(_)) {
        return Err(Error::InvalidArgument("density_kfree needs a k-free model".into()));
    }
    torus_density(model, beta, samples, seed)
}

pub fn density_totient(model: &ErrorTermModel, beta: f64, samples: u64, seed: u64) -> Result<TorusDensityEstimate> {
    if model.kind != Kind::Totient {
        return Err(Error::InvalidArgument("density_totient needs a totient model".into()));
    }
    torus_density(model, beta, samples, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum DistributionSource {
    /// `R~(X)` from exact tables, `X = 1..=xmax`.
    Exact { xmax: u64 },
    /// `E(X)` for `X = 1..=n`.
    Model { n: u64 },
    /// Draws from the limiting torus measure.
    Torus { n: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalDistribution {
    pub source: DistributionSource,
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    /// Sorts `samples`; NaN is rejected.
    pub fn new(source: DistributionSource, mut samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|s| s.is_nan()) {
            return Err(Error::InvalidArgument("NaN sample".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { source, samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.len() as f64
    }

    /// Fraction with `|s| <= beta`.
    pub fn density(&self, beta: f64) -> f64 {
        let lo = self.samples.partition_point(|&s| s < -beta);
        let hi = self.samples.partition_point(|&s| s <= beta);
        (hi - lo) as f64 / self.len() as f64
    }

    pub fn sup_abs(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => a.abs().max(b.abs()),
            _ => 0.0,
        }
    }

    /// `(1/N) sum cos(y s)`, the real part of the empirical characteristic
    /// function.
    pub fn characteristic(&self, y: f64) -> f64 {
        self.samples.iter().map(|s| (y * s).cos()).sum::<f64>() / self.len() as f64
    }
}

/// `E(X)` for `X = 1..=n`.
pub fn empirical_distribution(model: &ErrorTermModel, n: u64) -> Result<EmpiricalDistribution> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let values: Vec<f64> = (1..=n).into_par_iter().map(|x| model.eval(x)).collect();
    EmpiricalDistribution::new(DistributionSource::Model { n }, values)
}

/// `R~(X)` for `X = 1..=xmax` of an exact table.
pub fn exact_distribution(table: &SummatoryTable, mt: &MainTermConstants) -> Result<EmpiricalDistribution> {
    let values: Vec<f64> =
        (1..=table.xmax()).map(|x| normalized_error(table, mt, x).map(|s| s.r_tilde)).collect::<Result<_>>()?;
    EmpiricalDistribution::new(DistributionSource::Exact { xmax: table.xmax() as u64 }, values)
}

/// `n` draws from the limiting measure; draw `i` uses torus `i mod k`.
pub fn torus_samples(model: &ErrorTermModel, n: u64, seed: u64) -> Result<EmpiricalDistribution> {
    let amps = torus_amplitudes(model);
    let k = amps.len() as u64;
    let chunks: Vec<Vec<f64>> = batches(n, 0)
        .into_par_iter()
        .map(|(stream, m)| {
            let mut rng = stream_rng(seed, stream);
            let start = (stream & 0xffff_ffff) * BATCH;
            (0..m).map(|i| torus_value(&amps[((start + i) % k) as usize], &mut rng)).collect()
        })
        .collect();
    EmpiricalDistribution::new(DistributionSource::Torus { n, seed }, chunks.concat())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignDensities {
    pub plus: f64,
    pub minus: f64,
}

pub fn sign_densities(edf: &EmpiricalDistribution) -> Result<SignDensities> {
    if edf.is_empty() {
        return Err(Error::InvalidArgument("empty distribution".into()));
    }
    let s = edf.samples();
    let n = s.len() as f64;
    let minus = s.partition_point(|&v| v < 0.0);
    let plus = s.len() - s.partition_point(|&v| v <= 0.0);
    Ok(SignDensities { plus: plus as f64 / n, minus: minus as f64 / n })
}

/// Sup distance between two empirical CDFs.
pub fn kolmogorov_distance(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("empty distribution".into()));
    }
    let (xs, ys) = (a.samples(), b.samples());
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xs.len() || j < ys.len() {
        let v = match (xs.get(i), ys.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(d)
}

/// `J_0(z)` from its power series.
///
/// For `|z| <= 8` the terms stay below `e^4` and a compensated double sum
/// is accurate to a few ulps. Beyond that the alternating terms grow like
/// `e^{|z|}` and the sum is taken in MPFR with enough guard bits.
pub fn bessel_j0(z: f64) -> Result<f64> {
    if !z.is_finite() || z.abs() > J0_DOMAIN {
        return Err(Error::DomainTooLarge(z));
    }
    let w = -(z / 2.0) * (z / 2.0);
    if z.abs() <= 8.0 {
        let (mut sum, mut comp) = (1.0f64, 0.0f64);
        let mut term = 1.0f64;
        for m in 1..200u32 {
            term *= w / (m as f64 * m as f64);
            let t = sum + term;
            comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
            sum = t;
            if term.abs() < 1e-17 * (sum + comp).abs() {
                break;
            }
        }
        return Ok(sum + comp);
    }
    let prec = 53 + (z.abs() * std::f64::consts::LOG2_E).ceil() as u32 + 64;
    let w = Float::with_val(prec, z) / 2u32;
    let w = -(w.clone() * &w);
    let mut sum = Float::with_val(prec, 1);
    let mut term = Float::with_val(prec, 1);
    for m in 1..400u32 {
        term *= &w;
        term /= m * m;
        sum += &term;
        if term.clone().abs() < Float::with_val(prec, 1e-40) {
            break;
        }
    }
    Ok(sum.to_f64())
}

/// Fourier transform of the limiting measure:
/// `(1/k) sum_t prod_j J_0(2|sigma_{t,j}| y)`.
pub fn fourier_transform(model: &ErrorTermModel, y: f64) -> Result<f64> {
    let amps = torus_amplitudes(model);
    let mut total = 0.0;
    for row in &amps {
        let mut p = 1.0;
        for a in row {
            p *= bessel_j0(a * y)?;
        }
        total += p;
    }
    Ok(total / amps.len() as f64)
}

/// `delta` for `g = 1`: `P(|a cos theta| <= beta) = (2/pi) asin(min(1, beta/a))`
/// averaged over the tori.
pub fn arcsine_density(model: &ErrorTermModel, beta: f64) -> Result<f64> {
    if model.genus() != 1 {
        return Err(Error::InvalidArgument("closed form needs genus 1".into()));
    }
    let amps = torus_amplitudes(model);
    Ok(amps.iter().map(|a| 2.0 / PI * (beta / a[0]).min(1.0).asin()).sum::<f64>() / amps.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::model_for;
    use crate::zeta::LPolynomial;
    use rug::Integer;

    fn worked() -> LPolynomial {
        LPolynomial::new(5, 1, vec![Integer::from(1), Integer::from(-2), Integer::from(5)]).unwrap()
    }

    #[test]
    fn batches_cover_n() {
        let b = batches(3 * BATCH + 5, 7);
        assert_eq!(b.len(), 4);
        assert_eq!(b.iter().map(|x| x.1).sum::<u64>(), 3 * BATCH + 5);
        assert_eq!(b[3].0, (7 << 32) | 3);
        assert!(batches(0, 0).is_empty());
    }

    #[test]
    fn j0_values() {
        assert_eq!(bessel_j0(0.0).unwrap(), 1.0);
        assert!(bessel_j0(2.404825557695773).unwrap().abs() < 1e-10);
        for z in [0.3, 5.0, 9.5, 33.0, 59.0] {
            assert_eq!(bessel_j0(z).unwrap(), bessel_j0(-z).unwrap());
        }
        assert!(matches!(bessel_j0(61.0), Err(Error::DomainTooLarge(_))));
    }

    #[test]
    fn kolmogorov_basics() {
        let a = EmpiricalDistribution::new(DistributionSource::Model { n: 3 }, vec![0.3, -1.0, 2.0]).unwrap();
        assert_eq!(kolmogorov_distance(&a, &a).unwrap(), 0.0);
        let z = EmpiricalDistribution::new(DistributionSource::Model { n: 1 }, vec![0.0]).unwrap();
        let o = EmpiricalDistribution::new(DistributionSource::Model { n: 1 }, vec![1.0]).unwrap();
        assert_eq!(kolmogorov_distance(&z, &o).unwrap(), 1.0);
    }

    #[test]
    fn sign_degenerate() {
        let z = EmpiricalDistribution::new(DistributionSource::Model { n: 4 }, vec![0.0; 4]).unwrap();
        assert_eq!(sign_densities(&z).unwrap(), SignDensities { plus: 0.0, minus: 0.0 });
    }

    #[test]
    fn density_extremes_and_reproducibility() {
        let m = model_for(&worked(), Kind::Kfree(2)).unwrap();
        let total: f64 = torus_amplitudes(&m).iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max);
        assert_eq!(density_kfree(&m, total + 1e-9, 1000, 3).unwrap().delta, 1.0);
        assert!(density_kfree(&m, 1e-9, 10_000, 3).unwrap().delta < 1e-3);
        let a = density_kfree(&m, 0.4, 100_000, 9).unwrap();
        let b = density_kfree(&m, 0.4, 100_000, 9).unwrap();
        assert_eq!(a, b);
        assert!(density_totient(&m, 0.4, 10, 1).is_err());
    }

    #[test]
    fn mc_matches_arcsine() {
        let l = worked();
        for kind in [Kind::Kfree(2), Kind::Kfree(3), Kind::Totient] {
            let m = model_for(&l, kind).unwrap();
            for beta in [0.1, 0.5, 1.0] {
                let est = torus_density(&m, beta, 200_000, 11).unwrap();
                let exact = arcsine_density(&m, beta).unwrap();
                assert!((est.delta - exact).abs() < 3.0 * est.stderr + 1e-12, "{kind:?} {beta}");
            }
        }
    }

    #[test]
    fn fourier_at_zero_and_even() {
        let m = model_for(&worked(), Kind::Kfree(2)).unwrap();
        assert_eq!(fourier_transform(&m, 0.0).unwrap(), 1.0);
        assert_eq!(fourier_transform(&m, 1.3).unwrap(), fourier_transform(&m, -1.3).unwrap());
    }

    #[test]
    fn torus_draws_deterministic() {
        let m = model_for(&worked(), Kind::Kfree(3)).unwrap();
        let a = torus_samples(&m, 70_000, 5).unwrap();
        let b = torus_samples(&m, 70_000, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 70_000);
    }
}
