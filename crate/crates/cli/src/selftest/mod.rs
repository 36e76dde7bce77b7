//! Built-in acceptance checks, one per criterion, with a machine-readable
//! report.
//!
//! Every stochastic step is seeded and batched so the report is identical
//! for any thread count.

pub mod curves;
pub mod oracles;

use std::cell::OnceCell;
use std::f64::consts::PI;

use ffsum_core::explicit::residual_constant;
use ffsum_core::family::SweepOptions;
use ffsum_core::limit::{torus_amplitudes, torus_density, torus_samples};
use ffsum_core::rmt::{haar_phi_values, AngleSpectrum};
use ffsum_core::series::{genus0_kfree, genus0_totient};
use ffsum_core::{
    bessel_j0, bound_kfree, bound_residue_class, bound_totient, build_model, class_number, empirical_distribution,
    family_sweep, field_of_size, fourier_transform, inverse_zeros, kolmogorov_distance, l_polynomial, main_term, phi,
    sign_densities, zeta_at_q_power, EmpiricalDistribution, ErrorTermModel, FamilyReport, Kind, LPolynomial,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{empirical_sup, load_curve, oracle_for};

/// Model evaluations and torus draws per distribution check.
pub const DIST_SAMPLES: u64 = 1_000_000;
/// Haar samples per genus for the phi checks.
pub const HAAR_SAMPLES: u64 = 1_000_000;
/// Range of X for the bound checks.
pub const SUP_RANGE: u64 = 100_000;
pub const KINDS: [Kind; 3] = [Kind::Kfree(2), Kind::Kfree(3), Kind::Totient];
pub const FAMILY_BETAS: [f64; 4] = [1.0, 1.2, 1.5, 2.0];

#[derive(Debug, Clone)]
pub struct SelftestOptions {
    pub seed: u64,
    pub only: Option<Vec<u32>>,
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub status: &'static str,
    pub details: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub fault_injected: bool,
    pub criteria: Vec<CriterionResult>,
    pub passed: usize,
    pub failed: usize,
}

pub const CRITERIA: [(u32, &str); 12] = [
    (1, "genus-0 closed forms"),
    (2, "RH and functional equation"),
    (3, "oracle equivalence"),
    (4, "explicit-formula residual"),
    (5, "worked elliptic example"),
    (6, "limiting distribution"),
    (7, "no bias"),
    (8, "Fourier transform"),
    (9, "bounds"),
    (10, "phi minimum"),
    (11, "large-q statistics"),
    (12, "determinism"),
];

/// A simple-zero test curve with one kind.
struct Case {
    label: String,
    model: ErrorTermModel,
    edf: EmpiricalDistribution,
}

struct Ctx {
    seed: u64,
    fault: bool,
    cases: OnceCell<Result<Vec<Case>, String>>,
    haar: OnceCell<Result<Vec<Vec<f64>>, String>>,
    family: OnceCell<Result<FamilyReport, String>>,
}

type Check = Result<(bool, Value), String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

impl Ctx {
    fn cases(&self) -> Result<&Vec<Case>, String> {
        self.cases
            .get_or_init(|| {
                let mut out = Vec::new();
                for spec in curves::GENERIC {
                    let (curve, l) = load_curve(spec).map_err(err)?;
                    let zeros = inverse_zeros(&l).map_err(err)?;
                    for kind in KINDS {
                        let model = build_model(&l, &zeros, kind).map_err(err)?;
                        let edf = empirical_distribution(&model, DIST_SAMPLES).map_err(err)?;
                        out.push(Case { label: format!("{} {}", curve.id(), kind.label()), model, edf });
                    }
                }
                Ok(out)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `phi` on Haar samples for g = 1, 2, 3.
    fn haar(&self) -> Result<&Vec<Vec<f64>>, String> {
        self.haar
            .get_or_init(|| (1..=3).map(|g| haar_phi_values(g, HAAR_SAMPLES, self.seed).map_err(err)).collect())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn family(&self) -> Result<&FamilyReport, String> {
        self.family
            .get_or_init(|| {
                let field = field_of_size("9").map_err(err)?;
                let opts = SweepOptions { haar: None, keep_records: false };
                family_sweep(&field, 2, Kind::Totient, &FAMILY_BETAS, opts).map_err(err)
            })
            .as_ref()
            .map_err(Clone::clone)
    }
}

pub fn run_selftest(opts: &SelftestOptions) -> SelftestReport {
    let ctx = Ctx {
        seed: opts.seed,
        fault: opts.inject_fault,
        cases: OnceCell::new(),
        haar: OnceCell::new(),
        family: OnceCell::new(),
    };
    let mut criteria = Vec::new();
    for (id, name) in CRITERIA {
        if opts.only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let outcome = match id {
            1 => genus0(),
            2 => rh_and_fe(&ctx),
            3 => oracle_equivalence(),
            4 => residuals(),
            5 => worked_example(),
            6 => limiting_distribution(&ctx),
            7 => no_bias(&ctx),
            8 => fourier(&ctx),
            9 => bounds(&ctx),
            10 => phi_minimum(&ctx),
            11 => large_q(&ctx),
            _ => determinism(&ctx),
        };
        let (pass, details) = outcome.unwrap_or_else(|e| (false, json!({ "error": e })));
        criteria.push(CriterionResult { id, name, status: if pass { "PASS" } else { "FAIL" }, details });
    }
    let passed = criteria.iter().filter(|c| c.status == "PASS").count();
    SelftestReport {
        seed: opts.seed,
        fault_injected: opts.inject_fault,
        failed: criteria.len() - passed,
        passed,
        criteria,
    }
}

fn genus0() -> Check {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for q in [2u64, 3, 5] {
        for k in [2u32, 3] {
            for x in 1..=8u32 {
                let closed = genus0_kfree(q, k, x).map_err(err)?;
                let brute = oracles::kfree_below(q, k, x);
                checked += 1;
                if closed != brute {
                    mismatches.push(
                        json!({ "q": q, "k": k, "X": x, "closed": closed.to_string(), "brute": brute.to_string() }),
                    );
                }
            }
        }
        for x in 1..=6u32 {
            let closed = genus0_totient(q, x).map_err(err)?;
            let brute = oracles::totient_below(q, x);
            checked += 1;
            if closed != brute {
                mismatches.push(json!({ "q": q, "totient": true, "X": x, "closed": closed.to_string(), "brute": brute.to_string() }));
            }
        }
    }
    Ok((mismatches.is_empty(), json!({ "checked": checked, "mismatches": mismatches })))
}

fn rh_and_fe(ctx: &Ctx) -> Check {
    let mut ls: Vec<(String, LPolynomial)> = Vec::new();
    for c in curves::oracle_curves().map_err(err)? {
        let l = l_polynomial(&c.point_counts().map_err(err)?).map_err(err)?;
        ls.push((c.id(), l));
    }
    for spec in curves::GENERIC {
        let (c, l) = load_curve(spec).map_err(err)?;
        ls.push((c.id(), l));
    }
    if ctx.fault {
        // genus 2, so b_1 alone breaks b_3 = q b_1
        let (_, l) = load_curve(curves::GENERIC[2]).map_err(err)?;
        let mut b = l.coefficients().to_vec();
        b[1] += 1;
        let bad = LPolynomial::from_coefficients_unchecked(l.q(), l.genus(), b).map_err(err)?;
        ls.push(("corrupted".into(), bad));
    }
    let mut failures = Vec::new();
    let mut max_dev: f64 = 0.0;
    for (id, l) in &ls {
        if let Err(e) = l.check_functional_equation() {
            failures.push(json!({ "curve": id, "error": e.to_string() }));
            continue;
        }
        match inverse_zeros(l) {
            Ok(z) => {
                max_dev = max_dev.max(z.rh_deviation());
                if z.rh_deviation() >= 1e-9 {
                    failures.push(json!({ "curve": id, "rh_deviation": z.rh_deviation() }));
                }
            }
            Err(e) => failures.push(json!({ "curve": id, "error": e.to_string() })),
        }
    }
    // every family member went through the same checks inside the sweep
    let fam = ctx.family()?;
    let fam_ok = fam.max_rh_deviation < 1e-9;
    max_dev = max_dev.max(fam.max_rh_deviation);
    let pass = failures.is_empty() && fam_ok;
    Ok((
        pass,
        json!({
            "curves": ls.len(),
            "family_curves": fam.squarefree,
            "max_rh_deviation": max_dev,
            "tolerance": 1e-9,
            "failures": failures,
        }),
    ))
}

fn oracle_equivalence() -> Check {
    const XMAX: usize = 12;
    let curves = curves::oracle_curves().map_err(err)?;
    let mut mismatches = Vec::new();
    let mut max_genus = 0;
    for c in &curves {
        let l = l_polynomial(&c.point_counts().map_err(err)?).map_err(err)?;
        max_genus = max_genus.max(l.genus());
        for kind in KINDS {
            let table = match kind {
                Kind::Kfree(k) => ffsum_core::summatory_kfree(&l, k, XMAX),
                Kind::Totient => ffsum_core::summatory_totient(&l, XMAX),
            }
            .map_err(err)?;
            let oracle = oracle_for(&l, kind, XMAX).map_err(err)?;
            if !table.same_values(&oracle) {
                mismatches.push(json!({ "curve": c.id(), "kind": kind }));
            }
        }
    }
    let pass = mismatches.is_empty() && curves.len() >= 20;
    Ok((pass, json!({ "curves": curves.len(), "max_genus": max_genus, "xmax": XMAX, "mismatches": mismatches })))
}

fn residuals() -> Check {
    let mut rows = Vec::new();
    let mut pass = true;
    for spec in curves::GENERIC {
        let (curve, l) = load_curve(spec).map_err(err)?;
        let zeros = inverse_zeros(&l).map_err(err)?;
        for kind in KINDS {
            let table = match kind {
                Kind::Kfree(k) => ffsum_core::summatory_kfree(&l, k, 40),
                Kind::Totient => ffsum_core::summatory_totient(&l, 40),
            }
            .map_err(err)?;
            let mt = main_term(&l, kind).map_err(err)?;
            let model = build_model(&l, &zeros, kind).map_err(err)?;
            match residual_constant(&table, &mt, &model, 2..=40) {
                Ok(r) => rows.push(json!({
                    "curve": curve.id(), "kind": kind, "epsilon": r.epsilon, "max_dev": r.max_dev,
                })),
                Err(e) => {
                    pass = false;
                    rows.push(json!({ "curve": curve.id(), "kind": kind, "error": e.to_string() }));
                }
            }
        }
    }
    Ok((pass, json!({ "range": [2, 40], "relative_tolerance": 1e-6, "cases": rows })))
}

fn worked_example() -> Check {
    let (curve, l) = load_curve(curves::WORKED).map_err(err)?;
    let coeffs: Vec<String> = l.coefficients().iter().map(|c| c.to_string()).collect();
    let h = class_number(&l).to_string();
    let zeta2 = zeta_at_q_power(&l, 2).map_err(err)?.to_string();
    let d = main_term(&l, Kind::Kfree(2)).map_err(err)?.d.to_string();
    let pass = coeffs == ["1", "-2", "5"] && h == "4" && zeta2 == "29/24" && d == "6/29";
    Ok((pass, json!({ "curve": curve.id(), "L": coeffs, "h": h, "zeta_2": zeta2, "d_2": d })))
}

/// `delta` for genus 1 in closed form: `(2/pi) asin(min(1, beta/(2|sigma_t|)))`
/// averaged over the tori.
fn arcsine(model: &ErrorTermModel, beta: f64) -> f64 {
    let k = model.sigma.len() as f64;
    model.sigma.iter().map(|row| 2.0 / PI * (beta / (2.0 * row[0].norm())).min(1.0).asin()).sum::<f64>() / k
}

fn limiting_distribution(ctx: &Ctx) -> Check {
    let mut pass = true;
    let mut ks = Vec::new();
    let mut arc = Vec::new();
    for case in ctx.cases()? {
        let torus = torus_samples(&case.model, DIST_SAMPLES, ctx.seed).map_err(err)?;
        let d = kolmogorov_distance(&case.edf, &torus).map_err(err)?;
        pass &= d < 0.02;
        ks.push(json!({ "case": case.label, "distance": d }));
        if case.model.genus() == 1 {
            for beta in [0.25, 0.5, 1.0] {
                let est = torus_density(&case.model, beta, DIST_SAMPLES, ctx.seed).map_err(err)?;
                let exact = arcsine(&case.model, beta);
                let ok = (est.delta - exact).abs() <= 3.0 * est.stderr;
                pass &= ok;
                arc.push(json!({ "case": case.label, "beta": beta, "mc": est.delta, "stderr": est.stderr, "closed_form": exact }));
            }
        }
    }
    Ok((pass, json!({ "samples": DIST_SAMPLES, "kolmogorov_tolerance": 0.02, "kolmogorov": ks, "arcsine": arc })))
}

fn no_bias(ctx: &Ctx) -> Check {
    let mut pass = true;
    let mut rows = Vec::new();
    for case in ctx.cases()? {
        let s = sign_densities(&case.edf).map_err(err)?;
        pass &= (0.48..=0.52).contains(&s.plus) && (0.48..=0.52).contains(&s.minus);
        rows.push(json!({ "case": case.label, "plus": s.plus, "minus": s.minus }));
    }
    Ok((pass, json!({ "n": DIST_SAMPLES, "band": [0.48, 0.52], "cases": rows })))
}

fn fourier(ctx: &Ctx) -> Check {
    const FIRST_ZERO: f64 = 2.404825557695773;
    let j0 = bessel_j0(FIRST_ZERO).map_err(err)?;
    let mut pass = j0.abs() < 1e-10;
    let mut rows = Vec::new();
    for case in ctx.cases()? {
        for y in [0.5, 1.0, 2.0] {
            let mu = fourier_transform(&case.model, y).map_err(err)?;
            let cf = case.edf.characteristic(y);
            pass &= (mu - cf).abs() < 0.02;
            rows.push(json!({ "case": case.label, "y": y, "mu_hat": mu, "empirical_cf": cf }));
        }
    }
    Ok((pass, json!({ "j0_first_zero": j0, "tolerance": 0.02, "cases": rows })))
}

fn bounds(ctx: &Ctx) -> Check {
    let mut pass = true;
    let mut rows = Vec::new();
    let inside = |sup: f64, b: f64| sup >= 0.95 * b && sup <= b + 1e-9;
    for case in ctx.cases()? {
        let m = &case.model;
        let b = match m.kind {
            Kind::Totient => bound_totient(m).map_err(err)?,
            Kind::Kfree(_) => bound_kfree(m).map_err(err)?.b,
        };
        let sup = empirical_sup(m, SUP_RANGE, None).map_err(err)?;
        pass &= inside(sup, b);
        let mut classes = Vec::new();
        if let Kind::Kfree(k) = m.kind {
            for a in 0..k {
                let ba = bound_residue_class(m, a).map_err(err)?.b_a;
                let s = empirical_sup(m, SUP_RANGE, Some((a as u64, k as u64))).map_err(err)?;
                pass &= inside(s, ba);
                classes.push(json!({ "a": a, "bound": ba, "sup": s }));
            }
        }
        rows.push(json!({ "case": case.label, "bound": b, "sup": sup, "classes": classes }));
    }
    Ok((pass, json!({ "x_max": SUP_RANGE, "band": "[0.95 B, B + 1e-9]", "cases": rows })))
}

fn phi_minimum(ctx: &Ctx) -> Check {
    let mut pass = true;
    let mut quantized = Vec::new();
    for g in 1..=3 {
        let v = phi(&AngleSpectrum::quantized(g)).map_err(err)?;
        pass &= (v - 1.0).abs() < 1e-12;
        quantized.push(json!({ "g": g, "phi": v }));
    }
    let mut minima = Vec::new();
    for (i, values) in ctx.haar()?.iter().enumerate() {
        let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
        pass &= min >= 1.0 - 1e-12;
        minima.push(json!({ "g": i + 1, "samples": values.len(), "min_phi": min }));
    }
    Ok((pass, json!({ "quantized": quantized, "haar": minima })))
}

fn large_q(ctx: &Ctx) -> Check {
    let values = &ctx.haar()?[1];
    let n = values.len() as f64;
    let mu = |beta: f64| values.iter().filter(|&&v| v <= beta).count() as f64 / n;
    let (mu1, mu15) = (mu(1.0), mu(1.5));
    let mut pass = mu1 < 0.001 && mu15 > 0.001 && mu15 < 0.999;
    let fam = ctx.family()?;
    let mut rows = Vec::new();
    for row in &fam.rows {
        let haar = mu(row.beta);
        if row.beta == 1.5 {
            pass &= row.btilde_fraction > 0.0 && row.btilde_fraction < 1.0;
        }
        if [1.2, 1.5, 2.0].contains(&row.beta) {
            pass &= (row.phi_fraction - haar).abs() <= 0.1;
        }
        rows.push(json!({
            "beta": row.beta,
            "btilde_fraction": row.btilde_fraction,
            "btilde_fraction_all": row.btilde_fraction_all,
            "phi_fraction": row.phi_fraction,
            "phi_fraction_all": row.phi_fraction_all,
            "haar": haar,
        }));
    }
    Ok((
        pass,
        json!({
            "haar_g2": { "samples": values.len(), "mu_phi_le_1": mu1, "mu_phi_le_1_5": mu15 },
            "family": {
                "q": fam.q, "g": fam.g, "kind": fam.kind, "total": fam.total, "squarefree": fam.squarefree,
                "repeated_zero_flagged": fam.repeated_zero_flagged, "rows": rows,
            },
        }),
    ))
}

/// Runs a seeded pipeline in pools of one and two threads and compares the
/// serialized results byte for byte.
fn determinism(ctx: &Ctx) -> Check {
    let seed = ctx.seed;
    let pipeline = move || -> Result<String, String> {
        let (_, l) = load_curve(curves::GENERIC[3]).map_err(err)?;
        let model = build_model(&l, &inverse_zeros(&l).map_err(err)?, Kind::Kfree(3)).map_err(err)?;
        let est = torus_density(&model, 1.0, 200_000, seed).map_err(err)?;
        let draws = torus_samples(&model, 200_000, seed).map_err(err)?;
        let haar = haar_phi_values(2, 100_000, seed).map_err(err)?;
        let edf = empirical_distribution(&model, 200_000).map_err(err)?;
        let v = json!({
            "density": est,
            "torus_amplitudes": torus_amplitudes(&model),
            "draws_cf": draws.characteristic(1.0),
            "haar_sum": haar.iter().filter(|v| v.is_finite()).sum::<f64>(),
            "edf_cf": edf.characteristic(1.0),
        });
        Ok(v.to_string())
    };
    let run_in = |threads: usize| -> Result<String, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(err)?;
        pool.install(pipeline)
    };
    let a = run_in(1)?;
    let b = run_in(2)?;
    let c = run_in(1)?;
    Ok((a == b && a == c, json!({ "bytes": a.len(), "one_vs_two_threads_equal": a == b, "repeat_equal": a == c })))
}
