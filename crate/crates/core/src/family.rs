//! Exhaustive sweeps over the family of curves `y^2 = f(x)`, `f` monic
//! squarefree of degree `2g + 1` over `F_q`.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::curve::{is_squarefree, HyperellipticCurve, PointCounter, PointCounts};
use crate::error::{Error, Result};
use crate::explicit::{build_model, normalized_bound};
use crate::field::{FieldElement, FieldSpec};
use crate::rmt::{haar_probabilities, phi_angles, HaarEstimate};
use crate::series::Kind;
use crate::zeta::{class_number, inverse_zeros, l_polynomial};

/// Largest family enumerated, counted over all monic `f`.
pub const MAX_FAMILY: u128 = 10_000_000;

/// All monic `f` of degree `2g + 1`, indexed lexicographically with `c_0`
/// most significant.
#[derive(Debug, Clone)]
pub struct Family {
    field: Arc<FieldSpec>,
    g: usize,
    size: u64,
}

impl Family {
    pub fn new(field: &Arc<FieldSpec>, g: usize) -> Result<Self> {
        field.require_odd()?;
        if g == 0 {
            return Err(Error::InvalidArgument("genus must be at least 1".into()));
        }
        let size = (field.q as u128).checked_pow(2 * g as u32 + 1).unwrap_or(u128::MAX);
        if size > MAX_FAMILY {
            return Err(Error::FamilyTooLarge { size });
        }
        Ok(Self { field: field.clone(), g, size: size as u64 })
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    /// Number of monic `f`, squarefree or not.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Coefficients `c_0..c_{2g}, 1` of member `index`.
    pub fn polynomial(&self, index: u64) -> Vec<FieldElement> {
        let q = self.field.q;
        let n = 2 * self.g + 1;
        let mut digits = vec![0u64; n];
        let mut rest = index;
        for d in digits.iter_mut().rev() {
            *d = rest % q;
            rest /= q;
        }
        let mut f: Vec<FieldElement> = digits.iter().map(|&d| self.field.from_index(d)).collect();
        f.push(self.field.one());
        f
    }

    /// The curve at `index`, or `None` when `f` is not squarefree.
    pub fn curve(&self, index: u64) -> Option<HyperellipticCurve> {
        let f = self.polynomial(index);
        if !is_squarefree(&f) {
            return None;
        }
        Some(HyperellipticCurve::new(self.field.clone(), f).expect("monic squarefree of odd degree"))
    }

    /// Squarefree members in index order.
    pub fn iter(&self) -> impl Iterator<Item = HyperellipticCurve> + '_ {
        (0..self.size).filter_map(move |i| self.curve(i))
    }
}

pub fn enumerate_family(field: &Arc<FieldSpec>, g: usize) -> Result<Family> {
    Family::new(field, g)
}

/// Per-curve data of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRecord {
    pub index: u64,
    pub curve: String,
    pub h: String,
    pub theta: Vec<f64>,
    pub rh_deviation: f64,
    pub simple: bool,
    pub btilde: Option<f64>,
    pub phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaRow {
    pub beta: f64,
    /// Curves with simple zeros and `B~ <= beta`.
    pub btilde_count: u64,
    /// Curves with simple zeros and `phi <= beta`.
    pub phi_count: u64,
    /// Counts over the squarefree members.
    pub btilde_fraction: f64,
    pub phi_fraction: f64,
    /// Counts over all `q^{2g+1}` monic `f`.
    pub btilde_fraction_all: f64,
    pub phi_fraction_all: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyReport {
    pub q: u64,
    pub g: usize,
    pub kind: Kind,
    pub betas: Vec<f64>,
    /// `q^{2g+1}`.
    pub total: u64,
    pub singular_skipped: u64,
    /// `q^{2g+1} - q^{2g}`.
    pub squarefree: u64,
    pub repeated_zero_flagged: u64,
    pub max_rh_deviation: f64,
    pub rows: Vec<BetaRow>,
    pub haar_reference: Option<Vec<HaarEstimate>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<CurveRecord>,
}

/// Sweep options.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Haar samples and seed for the reference column.
    pub haar: Option<(u64, u64)>,
    pub keep_records: bool,
}

/// Point counts, `L`, zeros, `B~` and `phi` for one curve.
fn analyse(index: u64, curve: &HyperellipticCurve, counters: &[PointCounter], kind: Kind) -> Result<CurveRecord> {
    let n: Vec<u64> = counters.iter().map(|c| c.count(curve)).collect::<Result<_>>()?;
    let l = l_polynomial(&PointCounts::new(curve.q(), curve.genus(), n)?)?;
    let zeros = inverse_zeros(&l)?;
    let g = zeros.genus();
    let (btilde, phi) = if zeros.simple {
        let model = build_model(&l, &zeros, kind)?;
        (Some(normalized_bound(&model)?), phi_angles(&zeros.theta[..g]).ok())
    } else {
        (None, None)
    };
    Ok(CurveRecord {
        index,
        curve: curve.id(),
        h: class_number(&l).to_string(),
        theta: zeros.theta[..g].to_vec(),
        rh_deviation: zeros.rh_deviation(),
        simple: zeros.simple && phi.is_some(),
        btilde,
        phi,
    })
}

/// Tabulates `B~ <= beta` and `phi(theta(C)) <= beta` over the family.
///
/// Curves with repeated inverse zeros have no explicit formula and are
/// counted separately; they never enter the numerators.
pub fn family_sweep(
    field: &Arc<FieldSpec>,
    g: usize,
    kind: Kind,
    betas: &[f64],
    opts: SweepOptions,
) -> Result<FamilyReport> {
    let kind = kind.validate()?;
    let family = Family::new(field, g)?;
    let counters: Vec<PointCounter> = (1..=g as u32).map(|m| PointCounter::new(field, m)).collect::<Result<_>>()?;
    let results: Vec<Option<CurveRecord>> = (0..family.size())
        .into_par_iter()
        .map(|i| family.curve(i).map(|c| analyse(i, &c, &counters, kind)).transpose())
        .collect::<Result<_>>()?;
    let total = family.size();
    let records: Vec<CurveRecord> = results.into_iter().flatten().collect();
    let squarefree = records.len() as u64;
    let repeated = records.iter().filter(|r| !r.simple).count() as u64;
    let max_rh = records.iter().map(|r| r.rh_deviation).fold(0.0, f64::max);
    let rows = betas
        .iter()
        .map(|&beta| {
            let bt = records.iter().filter(|r| r.btilde.is_some_and(|b| b <= beta)).count() as u64;
            let ph = records.iter().filter(|r| r.simple && r.phi.is_some_and(|p| p <= beta)).count() as u64;
            BetaRow {
                beta,
                btilde_count: bt,
                phi_count: ph,
                btilde_fraction: bt as f64 / squarefree.max(1) as f64,
                phi_fraction: ph as f64 / squarefree.max(1) as f64,
                btilde_fraction_all: bt as f64 / total as f64,
                phi_fraction_all: ph as f64 / total as f64,
            }
        })
        .collect();
    let haar_reference = match opts.haar {
        Some((samples, seed)) => Some(haar_probabilities(g, betas, samples, seed)?),
        None => None,
    };
    Ok(FamilyReport {
        q: field.q,
        g,
        kind,
        betas: betas.to_vec(),
        total,
        singular_skipped: total - squarefree,
        squarefree,
        repeated_zero_flagged: repeated,
        max_rh_deviation: max_rh,
        rows,
        haar_reference,
        records: if opts.keep_records { records } else { Vec::new() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::construct_field;

    #[test]
    fn family_sizes() {
        for (p, expect) in [(3u64, 18usize), (5, 100)] {
            let f = construct_field(p, 1).unwrap();
            let fam = enumerate_family(&f, 1).unwrap();
            assert_eq!(fam.iter().count(), expect);
        }
        let f = construct_field(101, 1).unwrap();
        assert!(matches!(enumerate_family(&f, 2), Err(Error::FamilyTooLarge { .. })));
    }

    #[test]
    fn order_is_lexicographic() {
        let f = construct_field(3, 1).unwrap();
        let fam = enumerate_family(&f, 1).unwrap();
        let idx: Vec<Vec<u64>> = fam.polynomial(5).iter().map(|c| c.coeffs().to_vec()).collect();
        assert_eq!(idx, vec![vec![0], vec![1], vec![2], vec![1]]);
    }

    #[test]
    fn small_sweep_is_consistent() {
        let f = construct_field(5, 1).unwrap();
        let opts = SweepOptions { haar: None, keep_records: true };
        let r = family_sweep(&f, 1, Kind::Totient, &[1.0, 100.0], opts).unwrap();
        assert_eq!(r.squarefree, 100);
        assert_eq!(r.singular_skipped, 25);
        assert!(r.max_rh_deviation < 1e-9);
        assert_eq!(r.rows[1].phi_count + r.repeated_zero_flagged, 100);
        assert!(r.records.iter().all(|c| c.phi.is_none_or(|p| p >= 1.0 - 1e-12)));
        assert_eq!(r, family_sweep(&f, 1, Kind::Totient, &[1.0, 100.0], opts).unwrap());
    }
}
