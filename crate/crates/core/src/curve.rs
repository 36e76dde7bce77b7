//! Hyperelliptic curves `y^2 = f(x)` and exhaustive point counting.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{construct_field, FieldElement, FieldSpec};

/// `y^2 = f(x)` with `f` monic, squarefree, of degree `2g + 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct HyperellipticCurve {
    field: Arc<FieldSpec>,
    f: Vec<FieldElement>,
    g: usize,
}

impl HyperellipticCurve {
    /// Validates degree, leading coefficient and squarefreeness.
    pub fn new(field: Arc<FieldSpec>, f: Vec<FieldElement>) -> Result<Self> {
        field.require_odd()?;
        if f.iter().any(|c| c.spec() != &field) {
            return Err(Error::FieldMismatch);
        }
        let deg = f.len().checked_sub(1).ok_or_else(|| Error::InvalidCurve("empty f".into()))?;
        if deg < 3 || deg % 2 == 0 {
            return Err(Error::InvalidCurve(format!("deg f = {deg}, need odd degree >= 3")));
        }
        if !f[deg].is_one() {
            return Err(Error::InvalidCurve("f is not monic".into()));
        }
        if !is_squarefree(&f) {
            return Err(Error::InvalidCurve("f is not squarefree".into()));
        }
        Ok(Self { field, f, g: (deg - 1) / 2 })
    }

    /// Builds a curve over a prime field from integer coefficients.
    pub fn over_prime_field(p: u64, coeffs: &[i64]) -> Result<Self> {
        let field = construct_field(p, 1)?;
        let f = coeffs.iter().map(|&c| field.from_int(c)).collect();
        Self::new(field, f)
    }

    /// Parses `q=<p>[^<n>];f=<c0,c1,...>`.
    ///
    /// `q` may also be written as the prime power itself (`q=9`). A plain
    /// integer coefficient is a prime-field constant reduced mod p; elements
    /// of a proper extension are written as colon-separated coordinates
    /// `a0:a1:...` in the basis `1, t, t^2, ...`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut q_part = None;
        let mut f_part = None;
        for item in spec.split(';') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let (key, value) =
                item.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {item:?}")))?;
            match key.trim() {
                "q" => q_part = Some(value.trim()),
                "f" => f_part = Some(value.trim()),
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        let q_part = q_part.ok_or_else(|| Error::Parse("missing q=".into()))?;
        let f_part = f_part.ok_or_else(|| Error::Parse("missing f=".into()))?;
        let (p, n) = parse_field_size(q_part)?;
        let field = construct_field(p, n)?;
        let mut f = Vec::new();
        for c in f_part.split(',') {
            let coords: Vec<i64> = c
                .trim()
                .split(':')
                .map(|s| s.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad coefficient {c:?}"))))
                .collect::<Result<_>>()?;
            f.push(field.element(&coords)?);
        }
        Self::new(field, f)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.q
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coefficients(&self) -> &[FieldElement] {
        &self.f
    }

    /// Canonical identifier in the input grammar.
    pub fn id(&self) -> String {
        self.to_string()
    }

    /// Number of points over `F_{q^m}`.
    pub fn count_points(&self, m: u32) -> Result<u64> {
        PointCounter::new(&self.field, m)?.count(self)
    }

    /// `N_1, ..., N_g`.
    pub fn point_counts(&self) -> Result<PointCounts> {
        let n = (1..=self.g as u32).map(|m| self.count_points(m)).collect::<Result<Vec<_>>>()?;
        PointCounts::new(self.q(), self.g, n)
    }
}

impl fmt::Display for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = if self.field.n == 1 { self.field.p.to_string() } else { format!("{}^{}", self.field.p, self.field.n) };
        let coeffs: Vec<String> = self.f.iter().map(|c| c.to_string()).collect();
        write!(f, "q={};f={}", q, coeffs.join(","))
    }
}

impl fmt::Debug for HyperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HyperellipticCurve({self})")
    }
}

/// Splits a field size written as `p^n` or as the prime power `q`.
pub fn parse_field_size(s: &str) -> Result<(u64, u32)> {
    let bad = || Error::Parse(format!("bad field size {s:?}"));
    if let Some((p, n)) = s.split_once('^') {
        let p = p.trim().parse::<u64>().map_err(|_| bad())?;
        let n = n.trim().parse::<u32>().map_err(|_| bad())?;
        return Ok((p, n));
    }
    let q = s.trim().parse::<u64>().map_err(|_| bad())?;
    if q < 2 {
        return Err(bad());
    }
    if primal_check::miller_rabin(q) {
        return Ok((q, 1));
    }
    for n in (2..64u32).rev() {
        let r = (q as f64).powf(1.0 / n as f64).round() as u64;
        for p in r.saturating_sub(1).max(2)..=r + 1 {
            if p.checked_pow(n) == Some(q) && primal_check::miller_rabin(p) {
                return Ok((p, n));
            }
        }
    }
    Err(Error::Parse(format!("{q} is not a prime power")))
}

/// Field of the given size, written as in [`parse_field_size`].
pub fn field_of_size(s: &str) -> Result<Arc<FieldSpec>> {
    let (p, n) = parse_field_size(s)?;
    construct_field(p, n)
}

// Polynomials over F_q as coefficient vectors of field elements, ascending.

fn trim(a: &mut Vec<FieldElement>) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn poly_rem(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv = b[db].inv().expect("trimmed divisor has nonzero leading coefficient");
    while r.len() > db {
        let top = r.len() - 1;
        let c = r[top].mul(&inv).unwrap();
        for (i, bi) in b.iter().enumerate() {
            let s = top - db + i;
            r[s] = r[s].sub(&c.mul(bi).unwrap()).unwrap();
        }
        trim(&mut r);
    }
    r
}

/// `gcd(f, f') = 1` over `F_q`.
pub fn is_squarefree(f: &[FieldElement]) -> bool {
    let mut a = f.to_vec();
    trim(&mut a);
    if a.len() <= 1 {
        return true;
    }
    let spec = a[0].spec().clone();
    let mut b: Vec<FieldElement> =
        a.iter().enumerate().skip(1).map(|(i, c)| c.mul(&spec.from_int(i as i64)).unwrap()).collect();
    trim(&mut b);
    if b.is_empty() {
        // f' = 0 means f is a p-th power
        return false;
    }
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a.len() == 1
}

/// Reusable context for counting points over a fixed extension `F_{q^m}`.
///
/// Building the extension field, the embedding of `F_q` and the table of
/// squares is done once; [`PointCounter::count`] can then be called for many
/// curves over the same base field.
pub struct PointCounter {
    base: Arc<FieldSpec>,
    ext: Arc<FieldSpec>,
    /// Images in `F_{q^m}` of the basis `1, t, ..., t^{n-1}` of `F_q`.
    basis: Vec<Vec<u64>>,
    chi: Option<Vec<i8>>,
}

const MAX_COUNT_FIELD: u128 = 1 << 32;
const MAX_CHI_TABLE: u64 = 1 << 25;

impl PointCounter {
    pub fn new(base: &Arc<FieldSpec>, m: u32) -> Result<Self> {
        base.require_odd()?;
        if m == 0 {
            return Err(Error::InvalidArgument("extension degree m must be at least 1".into()));
        }
        let size = (base.q as u128).checked_pow(m).unwrap_or(u128::MAX);
        if size > MAX_COUNT_FIELD {
            return Err(Error::CountTooLarge { size });
        }
        let ext = if m == 1 { base.clone() } else { construct_field(base.p, base.n * m)? };
        let basis = embed_basis(base, &ext);
        let chi = (ext.q <= MAX_CHI_TABLE).then(|| squares_table(&ext));
        Ok(Self { base: base.clone(), ext, basis, chi })
    }

    pub fn extension(&self) -> &Arc<FieldSpec> {
        &self.ext
    }

    /// Maps an element of `F_q` into `F_{q^m}`.
    pub fn embed(&self, a: &FieldElement) -> Vec<u64> {
        let p = self.ext.p;
        let mut out = vec![0u64; self.ext.degree()];
        for (i, &c) in a.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(&self.basis[i]) {
                *o = ((*o as u128 + c as u128 * b as u128) % p as u128) as u64;
            }
        }
        out
    }

    /// `1 + sum_x (1 + chi(f(x)))` over `x` in `F_{q^m}`.
    pub fn count(&self, curve: &HyperellipticCurve) -> Result<u64> {
        if curve.field() != &self.base {
            return Err(Error::FieldMismatch);
        }
        let ext = &*self.ext;
        let n = ext.degree();
        let f: Vec<Vec<u64>> = curve.coefficients().iter().map(|c| self.embed(c)).collect();
        let mut x = vec![0u64; n];
        let mut acc = vec![0u64; n];
        let mut tmp = vec![0u64; n];
        let mut scratch = vec![0u64; 2 * n];
        let mut chi_sum: i128 = 0;
        for _ in 0..ext.q {
            acc.copy_from_slice(&f[f.len() - 1]);
            for c in f.iter().rev().skip(1) {
                ext.raw_mul(&acc, &x, &mut tmp, &mut scratch);
                ext.raw_add(&tmp, c, &mut acc);
            }
            chi_sum += match &self.chi {
                Some(table) => table[ext.raw_index(&acc) as usize] as i128,
                None => self.ext.from_index(ext.raw_index(&acc)).quadratic_character()? as i128,
            };
            // odometer increment of x
            for d in x.iter_mut() {
                *d += 1;
                if *d < ext.p {
                    break;
                }
                *d = 0;
            }
        }
        let total = 1 + ext.q as i128 + chi_sum;
        Ok(total as u64)
    }
}

fn embed_basis(base: &Arc<FieldSpec>, ext: &Arc<FieldSpec>) -> Vec<Vec<u64>> {
    let n = ext.degree();
    let mut one = vec![0u64; n];
    one[0] = 1;
    if base.n == 1 {
        return vec![one];
    }
    // smallest-index root of the base modulus inside the extension
    let mut scratch = vec![0u64; 2 * n];
    let mut acc = vec![0u64; n];
    let mut tmp = vec![0u64; n];
    let root = (0..ext.q)
        .map(|i| ext.from_index(i))
        .find(|r| {
            acc.fill(0);
            acc[0] = base.modulus[base.degree()];
            for &c in base.modulus.iter().rev().skip(1) {
                ext.raw_mul(&acc, r.coeffs(), &mut tmp, &mut scratch);
                tmp[0] = (tmp[0] + c) % ext.p;
                acc.copy_from_slice(&tmp);
            }
            acc.iter().all(|&c| c == 0)
        })
        .expect("a finite field contains every field of subfield order");
    let mut basis = vec![one];
    for _ in 1..base.degree() {
        let prev = basis.last().unwrap();
        ext.raw_mul(prev, root.coeffs(), &mut tmp, &mut scratch);
        basis.push(tmp.clone());
    }
    basis
}

fn squares_table(ext: &Arc<FieldSpec>) -> Vec<i8> {
    let n = ext.degree();
    let mut table = vec![-1i8; ext.q as usize];
    table[0] = 0;
    let mut x = vec![0u64; n];
    let mut sq = vec![0u64; n];
    let mut scratch = vec![0u64; 2 * n];
    for _ in 0..ext.q {
        ext.raw_mul(&x, &x, &mut sq, &mut scratch);
        let idx = ext.raw_index(&sq) as usize;
        if idx != 0 {
            table[idx] = 1;
        }
        for d in x.iter_mut() {
            *d += 1;
            if *d < ext.p {
                break;
            }
            *d = 0;
        }
    }
    table
}

/// Free-function form of [`HyperellipticCurve::count_points`].
pub fn count_points(curve: &HyperellipticCurve, m: u32) -> Result<u64> {
    curve.count_points(m)
}

/// `N_m = #C(F_{q^m})` for `m = 1..=g`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointCounts {
    pub q: u64,
    pub g: usize,
    pub n: Vec<u64>,
}

impl PointCounts {
    /// Checks the Weil bound `|N_m - q^m - 1| <= 2g q^{m/2}` exactly.
    pub fn new(q: u64, g: usize, n: Vec<u64>) -> Result<Self> {
        if n.len() < g {
            return Err(Error::InvalidArgument(format!("need {g} point counts, got {}", n.len())));
        }
        for (i, &nm) in n.iter().enumerate() {
            let m = i as u32 + 1;
            let Some(qm) = (q as i128).checked_pow(m) else { break };
            let dev = nm as i128 - qm - 1;
            let bound = 4 * (g as i128) * (g as i128);
            if dev.checked_mul(dev).is_none_or(|d2| bound.checked_mul(qm).is_some_and(|b| d2 > b)) {
                return Err(Error::WeilBound { m: m as usize });
            }
        }
        Ok(Self { q, g, n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts affine solutions of y^2 = f(x) by scanning all pairs.
    fn pair_scan(curve: &HyperellipticCurve) -> u64 {
        let field = curve.field();
        let f = curve.coefficients();
        let mut count = 1;
        for x in field.elements() {
            let mut fx = field.zero();
            for c in f.iter().rev() {
                fx = fx.mul(&x).unwrap().add(c).unwrap();
            }
            for y in field.elements() {
                if y.mul(&y).unwrap() == fx {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn worked_curve_over_f5() {
        let c = HyperellipticCurve::parse("q=5;f=0,1,0,1").unwrap();
        assert_eq!(c.genus(), 1);
        assert_eq!(c.count_points(1).unwrap(), 4);
        assert_eq!(pair_scan(&c), 4);
    }

    #[test]
    fn worked_curve_over_f25() {
        // N_2 of y^2 = x^3 + x over F_5, computed from a pair scan over F_25
        // built independently as F_5[t]/(t^2 - 2).
        let p = 5u64;
        let mul = |a: (u64, u64), b: (u64, u64)| ((a.0 * b.0 + 2 * a.1 * b.1) % p, (a.0 * b.1 + a.1 * b.0) % p);
        let mut n2 = 1;
        for x0 in 0..p {
            for x1 in 0..p {
                let x = (x0, x1);
                let x3 = mul(mul(x, x), x);
                let fx = ((x3.0 + x.0) % p, (x3.1 + x.1) % p);
                for y0 in 0..p {
                    for y1 in 0..p {
                        if mul((y0, y1), (y0, y1)) == fx {
                            n2 += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(n2, 32);
        let c = HyperellipticCurve::parse("q=5;f=0,1,0,1").unwrap();
        assert_eq!(c.count_points(2).unwrap(), n2);
    }

    #[test]
    fn extension_field_curve_matches_pair_scan() {
        let c = HyperellipticCurve::parse("q=3^2;f=1:1,0,2,0,0,1").unwrap();
        assert_eq!(c.genus(), 2);
        assert_eq!(c.count_points(1).unwrap(), pair_scan(&c));
        let c = HyperellipticCurve::parse("q=9;f=0:1,1,0,1").unwrap();
        assert_eq!(c.count_points(1).unwrap(), pair_scan(&c));
    }

    #[test]
    fn extension_counts_agree_with_base_change() {
        // a curve over F_3 viewed over F_9 has the same N_1 as N_2 over F_3
        let c3 = HyperellipticCurve::parse("q=3;f=1,2,0,1").unwrap();
        let c9 = HyperellipticCurve::parse("q=9;f=1,2,0,1").unwrap();
        assert_eq!(c3.count_points(2).unwrap(), c9.count_points(1).unwrap());
        assert_eq!(c3.count_points(4).unwrap(), c9.count_points(2).unwrap());
    }

    #[test]
    fn rejects_bad_curves() {
        assert!(matches!(HyperellipticCurve::parse("q=5;f=0,1,0,2"), Err(Error::InvalidCurve(_))));
        assert!(matches!(HyperellipticCurve::parse("q=5;f=0,0,0,1"), Err(Error::InvalidCurve(_))));
        assert!(matches!(HyperellipticCurve::parse("q=5;f=0,1,1,0,1"), Err(Error::InvalidCurve(_))));
        assert!(matches!(HyperellipticCurve::parse("q=2;f=1,1,0,1"), Err(Error::EvenCharacteristic)));
        assert!(matches!(HyperellipticCurve::parse("q=6;f=1,1,0,1"), Err(Error::Parse(_))));
        assert!(matches!(HyperellipticCurve::parse("f=1,1,0,1"), Err(Error::Parse(_))));
    }

    #[test]
    fn id_round_trips() {
        for s in ["q=5;f=0,1,0,1", "q=3^2;f=1:1,0,2,0,0,1", "q=7;f=3,0,1,5,0,1"] {
            let c = HyperellipticCurve::parse(s).unwrap();
            assert_eq!(HyperellipticCurve::parse(&c.id()).unwrap(), c);
        }
        assert_eq!(HyperellipticCurve::parse("q=5;f=-5,6,0,1").unwrap().id(), "q=5;f=0,1,0,1");
    }

    #[test]
    fn weil_bound_enforced() {
        assert!(PointCounts::new(5, 1, vec![4]).is_ok());
        assert_eq!(PointCounts::new(5, 1, vec![11]).unwrap_err(), Error::WeilBound { m: 1 });
    }
}
