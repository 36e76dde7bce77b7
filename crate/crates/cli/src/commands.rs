//! One function per subcommand.

use ffsum_core::explicit::{exact_error, normalized_bound, residual_constant};
use ffsum_core::family::SweepOptions;
use ffsum_core::limit::{arcsine_density, exact_distribution, torus_density, torus_samples};
use ffsum_core::rmt::{haar_phi_values, HaarEstimate};
use ffsum_core::series::PrimeDegreeCounts;
use ffsum_core::{
    bound_kfree, bound_residue_class, bound_totient, build_model, class_number, empirical_distribution, family_sweep,
    field_of_size, fourier_transform, inverse_zeros, kolmogorov_distance, l_polynomial, main_term, normalized_error,
    oracle_kfree, oracle_totient, oscillatory_sum, sign_densities, summatory_kfree, summatory_totient, zeta_at_q_power,
    ErrorTermModel, HyperellipticCurve, Kind, LPolynomial, SummatoryTable,
};
use serde_json::{json, Value};

use crate::output::{CliError, Output, Table};
use crate::selftest::{run_selftest, SelftestOptions};
use crate::{
    Command, CurveArgs, DistributionArgs, ExplicitArgs, FamilyArgs, HaarArgs, RunConfig, SelftestArgs, SummatoryArgs,
};

type CmdResult = Result<Output, CliError>;

pub fn dispatch(config: &RunConfig) -> CmdResult {
    match &config.command {
        Command::Zeta(a) => zeta(a),
        Command::Summatory(a) => summatory(a),
        Command::Explicit(a) => explicit(a),
        Command::Distribution(a) => distribution(a),
        Command::Haar(a) => haar(a),
        Command::Family(a) => family(a, config.csv.is_some()),
        Command::Selftest(a) => selftest(a),
    }
}

/// Parses a curve and computes its L-polynomial.
pub fn load_curve(spec: &str) -> Result<(HyperellipticCurve, LPolynomial), CliError> {
    let curve = HyperellipticCurve::parse(spec)?;
    let l = l_polynomial(&curve.point_counts()?)?;
    Ok((curve, l))
}

/// Shortest round-trip form, with an exponent for very large or small values.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn zeta(a: &CurveArgs) -> CmdResult {
    let (curve, l) = load_curve(&a.curve)?;
    let counts = curve.point_counts()?;
    let zeros = inverse_zeros(&l)?;
    let zeta2 = zeta_at_q_power(&l, 2)?;
    let mut table = Table::new(&["j", "re", "im", "theta", "modulus"]);
    for (j, (z, t)) in zeros.gamma.iter().zip(&zeros.theta).enumerate() {
        table.push(vec![j.to_string(), num(z.re), num(z.im), num(*t), num(z.norm())]);
    }
    Ok(Output::ok(json!({
        "command": "zeta",
        "curve": curve.id(),
        "q": l.q(),
        "g": l.genus(),
        "point_counts": counts.n,
        "L": strings(l.coefficients()),
        "h": class_number(&l).to_string(),
        "zeta_at_q_minus_2": zeta2.to_string(),
        "zeros": zeros,
        "rh_deviation": zeros.rh_deviation(),
    }))
    .with_csv(table))
}

fn table_for(l: &LPolynomial, kind: Kind, xmax: usize) -> Result<SummatoryTable, CliError> {
    Ok(match kind {
        Kind::Kfree(k) => summatory_kfree(l, k, xmax)?,
        Kind::Totient => summatory_totient(l, xmax)?,
    })
}

/// Euler-product table for the same curve.
pub fn oracle_for(l: &LPolynomial, kind: Kind, xmax: usize) -> Result<SummatoryTable, CliError> {
    let primes = PrimeDegreeCounts::from_l(l, xmax)?;
    Ok(match kind {
        Kind::Kfree(k) => oracle_kfree(&primes, k, xmax)?,
        Kind::Totient => oracle_totient(&primes, xmax)?,
    })
}

fn summatory(a: &SummatoryArgs) -> CmdResult {
    let (curve, l) = load_curve(&a.curve.curve)?;
    let kind = a.kind.kind().validate()?;
    if a.xmax == 0 {
        return Err(CliError::Usage("--xmax must be at least 1".into()));
    }
    let table = table_for(&l, kind, a.xmax)?;
    let oracle = if a.oracle { Some(oracle_for(&l, kind, a.xmax)?) } else { None };
    let equal = oracle.as_ref().map(|o| o.same_values(&table));
    let mut csv = Table::new(if a.oracle { &["X", "value", "oracle"] } else { &["X", "value"] });
    for x in 1..=a.xmax {
        let mut row = vec![x.to_string(), table.get(x)?.to_string()];
        if let Some(o) = &oracle {
            row.push(o.get(x)?.to_string());
        }
        csv.push(row);
    }
    let mut json = json!({
        "command": "summatory",
        "curve": curve.id(),
        "kind": kind,
        "xmax": a.xmax,
        "values": strings(table.values()),
    });
    if let Some(o) = &oracle {
        json["oracle"] = json!({ "values": strings(o.values()), "equal": equal });
    }
    let mut out = Output::ok(json).with_csv(csv);
    if equal == Some(false) {
        out.status = 2;
    }
    Ok(out)
}

/// Sup of `|E(X)|` over `X = 1..=n`, optionally restricted to `X ≡ a (mod k)`.
pub fn empirical_sup(model: &ErrorTermModel, n: u64, class: Option<(u64, u64)>) -> Result<f64, CliError> {
    let mut sup: f64 = 0.0;
    for x in 1..=n {
        if let Some((a, k)) = class {
            if x % k != a {
                continue;
            }
        }
        sup = sup.max(oscillatory_sum(model, x)?.abs());
    }
    Ok(sup)
}

fn explicit(a: &ExplicitArgs) -> CmdResult {
    let (curve, l) = load_curve(&a.curve.curve)?;
    let kind = a.kind.kind().validate()?;
    let zeros = inverse_zeros(&l)?;
    let model = build_model(&l, &zeros, kind)?;
    let table = table_for(&l, kind, a.xmax)?;
    let mt = main_term(&l, kind)?;
    let residual = residual_constant(&table, &mt, &model, a.from..=a.xmax)?;
    let sup = empirical_sup(&model, a.sup_n, None)?;
    let bounds = match kind {
        Kind::Kfree(k) => {
            let b = bound_kfree(&model)?;
            let classes: Vec<Value> = (0..k)
                .map(|r| -> Result<Value, CliError> {
                    let c = bound_residue_class(&model, r)?;
                    let s = empirical_sup(&model, a.sup_n, Some((r as u64, k as u64)))?;
                    Ok(json!({ "bound": c, "empirical_sup": s }))
                })
                .collect::<Result<_, _>>()?;
            json!({
                "li_conditional_bound": b.b,
                "triangle_bound": b.b,
                "argmax_a": b.argmax_a,
                "normalized": normalized_bound(&model)?,
                "residue_classes": classes,
            })
        }
        Kind::Totient => {
            let b = bound_totient(&model)?;
            json!({
                "li_conditional_bound": b,
                "triangle_bound": b,
                "normalized": normalized_bound(&model)?,
            })
        }
    };
    let mut csv = Table::new(&["X", "r_tilde_exact", "e_model", "residual"]);
    for x in 1..=a.xmax {
        let r = normalized_error(&table, &mt, x)?;
        let res = if x >= residual.x_min { num(residual.residuals[x - residual.x_min]) } else { String::new() };
        csv.push(vec![x.to_string(), num(r.r_tilde), num(model.eval(x as u64)), res]);
    }
    Ok(Output::ok(json!({
        "command": "explicit",
        "curve": curve.id(),
        "kind": kind,
        "main_term": mt,
        "R_at_1": exact_error(&table, &mt, 1)?.to_string(),
        "model": model,
        "residual": residual,
        "bounds": bounds,
        "empirical_sup": { "n": a.sup_n, "sup": sup },
    }))
    .with_csv(csv))
}

fn distribution(a: &DistributionArgs) -> CmdResult {
    let seed = a.seed.expect("validated in RunConfig");
    let (curve, l) = load_curve(&a.curve.curve)?;
    let kind = a.kind.kind().validate()?;
    let model = build_model(&l, &inverse_zeros(&l)?, kind)?;
    let edf = empirical_distribution(&model, a.n)?;
    let torus = torus_samples(&model, a.mc_samples, seed)?;
    let mut csv = Table::new(&["beta", "delta", "stderr", "edf_delta"]);
    let mut densities = Vec::new();
    for &beta in &a.betas {
        let est = torus_density(&model, beta, a.mc_samples, seed)?;
        let closed = if l.genus() == 1 { Some(arcsine_density(&model, beta)?) } else { None };
        csv.push(vec![num(beta), num(est.delta), num(est.stderr), num(edf.density(beta))]);
        densities.push(json!({ "torus": est, "model_edf": edf.density(beta), "arcsine": closed }));
    }
    let fourier: Vec<Value> =
        a.ys.iter()
            .map(|&y| -> Result<Value, CliError> {
                Ok(json!({ "y": y, "mu_hat": fourier_transform(&model, y)?, "empirical_cf": edf.characteristic(y) }))
            })
            .collect::<Result<_, _>>()?;
    // exact-table values for the start of the sequence
    let table = table_for(&l, kind, 40)?;
    let exact = exact_distribution(&table, &main_term(&l, kind)?)?;
    Ok(Output::ok(json!({
        "command": "distribution",
        "curve": curve.id(),
        "kind": kind,
        "seed": seed,
        "mc_samples": a.mc_samples,
        "n": a.n,
        "densities": densities,
        "fourier": fourier,
        "kolmogorov_model_vs_torus": kolmogorov_distance(&edf, &torus)?,
        "kolmogorov_exact_vs_model": kolmogorov_distance(&exact, &edf)?,
        "sign_densities": { "model": sign_densities(&edf)?, "torus": sign_densities(&torus)? },
    }))
    .with_csv(csv))
}

fn haar(a: &HaarArgs) -> CmdResult {
    let seed = a.seed.expect("validated in RunConfig");
    if a.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let values = haar_phi_values(a.g, a.samples, seed)?;
    let n = values.len() as f64;
    let estimates: Vec<HaarEstimate> = a
        .betas
        .iter()
        .map(|&beta| {
            let mu = values.iter().filter(|&&v| v <= beta).count() as f64 / n;
            HaarEstimate { g: a.g, beta, mu, stderr: (mu * (1.0 - mu) / n).sqrt(), samples: a.samples, seed }
        })
        .collect();
    let mut csv = Table::new(&["beta", "mu", "stderr"]);
    for e in &estimates {
        csv.push(vec![num(e.beta), num(e.mu), num(e.stderr)]);
    }
    Ok(Output::ok(json!({
        "command": "haar",
        "g": a.g,
        "seed": seed,
        "samples": a.samples,
        "estimates": estimates,
        "min_phi": values.iter().cloned().fold(f64::INFINITY, f64::min),
    }))
    .with_csv(csv))
}

fn family(a: &FamilyArgs, keep_records: bool) -> CmdResult {
    let field = field_of_size(&a.q)?;
    let kind = a.kind.kind().validate()?;
    let haar = (a.haar_samples > 0).then(|| (a.haar_samples, a.seed.expect("validated in RunConfig")));
    let report = family_sweep(&field, a.g, kind, &a.betas, SweepOptions { haar, keep_records })?;
    let mut csv = Table::new(&["index", "curve", "h", "theta", "btilde", "phi"]);
    for r in &report.records {
        let theta: Vec<String> = r.theta.iter().map(|&t| num(t)).collect();
        csv.push(vec![
            r.index.to_string(),
            r.curve.clone(),
            r.h.clone(),
            theta.join(";"),
            r.btilde.map_or(String::new(), num),
            r.phi.map_or(String::new(), num),
        ]);
    }
    let mut json = serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?;
    if let Value::Object(m) = &mut json {
        m.remove("records");
        m.insert("command".into(), json!("family"));
        m.insert("seed".into(), json!(a.seed));
    }
    Ok(Output::ok(json).with_csv(csv))
}

fn selftest(a: &SelftestArgs) -> CmdResult {
    let opts = SelftestOptions {
        seed: a.seed.expect("validated in RunConfig"),
        only: if a.only.is_empty() { None } else { Some(a.only.clone()) },
        inject_fault: a.inject_fault,
    };
    let report = run_selftest(&opts);
    let status = if report.failed == 0 { 0 } else { 2 };
    let mut csv = Table::new(&["id", "name", "status"]);
    for c in &report.criteria {
        csv.push(vec![c.id.to_string(), c.name.to_string(), c.status.to_string()]);
    }
    let json = serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Output { json, csv: Some(csv), status })
}
