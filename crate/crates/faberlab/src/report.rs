//! Report envelopes and the drivers behind the `faberlab` binary.
//!
//! Every driver produces a [`RunOutcome`]: a JSON-serializable envelope
//! (schema `faberlab/1`), an optional CSV payload, and the process exit
//! code. Exact integers serialize as decimal strings; items are ordered by
//! `(k, m, n)`; identical configurations produce byte-identical output
//! regardless of the parallelism degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arcdist::{
    arc_sample_with, ks_distance, quad_a, quad_b, raveh_zero_count, ArcDistError, LimitLaw,
};
use crate::faber::MillerBasis;
use crate::modforms::KPRIMES;
use crate::powersums::{
    constant_c0_oracle, linearity_constants, verify_linearity_with, DEFAULT_PARTITION_CAP,
};
use crate::realroots::{conjectured_min_m, min_m_off_arc_with, root_report};

/// Schema tag of every JSON envelope.
pub const SCHEMA: &str = "faberlab/1";
/// Default KS-distance threshold for the `dist` verdict.
pub const DEFAULT_KS_THRESHOLD: f64 = 0.06;

/// Exit-code contract: 0 all pass, 1 mathematical verdict failure,
/// 2 usage or configuration error, 3 precondition not met.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub checked: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub items: Vec<Value>,
    pub summary: Summary,
    pub first_failure: Option<Value>,
}

impl ReportEnvelope {
    fn build(command: &str, config: Value, items: Vec<Value>) -> Self {
        let checked = items.len();
        let failed_items: Vec<&Value> = items
            .iter()
            .filter(|it| it.get("pass").and_then(Value::as_bool) == Some(false))
            .collect();
        let failed = failed_items.len();
        let first_failure = failed_items.first().map(|v| (*v).clone());
        ReportEnvelope {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config,
            items,
            summary: Summary { checked, passed: checked - failed, failed },
            first_failure,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

/// What a driver hands back to the binary.
#[derive(Debug)]
pub struct RunOutcome {
    pub envelope: ReportEnvelope,
    /// CSV payload for commands that emit one (`dist` angles, tabular
    /// formats).
    pub csv: Option<String>,
    pub exit: i32,
}

/// Builds (or reuses) a rayon pool of the requested width and runs the
/// closure inside it. `jobs` falls back to `FABERLAB_JOBS`, then to the
/// machine's parallelism.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    let jobs = jobs
        .or_else(|| std::env::var("FABERLAB_JOBS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    pool.install(f)
}

fn big(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

fn rat(x: &BigRational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

/// Expands an `ell` range and optional `k'` filter into weights, ordered
/// by `(ell, k')`.
fn weights_for(l_min: u64, l_max: u64, kprime: Option<u32>) -> Result<Vec<i64>, String> {
    if l_min > l_max {
        return Err(format!("empty range: l_min = {l_min} > l_max = {l_max}"));
    }
    let kps: Vec<u32> = match kprime {
        None => KPRIMES.to_vec(),
        Some(kp) if KPRIMES.contains(&kp) => vec![kp],
        Some(kp) => return Err(format!("k' = {kp} not one of {KPRIMES:?}")),
    };
    let mut out = Vec::new();
    for ell in l_min..=l_max {
        for &kp in &kps {
            let k = 12 * ell as i64 + kp as i64;
            if k >= 4 || k == 0 {
                out.push(k);
            }
        }
    }
    if out.is_empty() {
        return Err("empty weight range".into());
    }
    Ok(out)
}

/// `faber --k K --m M`: the coefficients and the Miller-prefix verdict.
pub fn run_faber(k: i64, m: i64) -> Result<RunOutcome, String> {
    let basis = MillerBasis::new(k).map_err(|e| e.to_string())?;
    let poly = basis.faber(m).map_err(|e| e.to_string())?;
    let valid = basis.validate_miller_prefix(&poly);
    let coeffs: Vec<Value> = poly.coeffs.iter().map(big).collect();
    let item = json!({
        "k": k,
        "m": m,
        "degree": poly.degree(),
        "coefficients": coeffs,
        "miller_prefix_valid": valid,
        "pass": valid,
    });
    let mut csv = String::from("n,coefficient\n");
    for (n, c) in poly.coeffs.iter().enumerate() {
        csv.push_str(&format!("{n},{c}\n"));
    }
    let envelope =
        ReportEnvelope::build("faber", json!({ "k": k, "m": m }), vec![item]);
    let exit = if valid { EXIT_PASS } else { EXIT_VERDICT };
    Ok(RunOutcome { envelope, csv: Some(csv), exit })
}

/// `constants --n-max N [--quad]`: the exact constants with their oracle
/// agreements and, on request, the quadrature residuals.
pub fn run_constants(n_max: u32, quad: bool) -> Result<RunOutcome, String> {
    if n_max < 1 {
        return Err("n_max must be >= 1".into());
    }
    let consts = linearity_constants(n_max).map_err(|e| e.to_string())?;
    let mut items = Vec::new();
    let mut csv = String::from("n,a,b,c6,ratio,oracle_c0_match,quad_a_residual,quad_b_residual\n");
    for c in &consts {
        let minus_b = -&c.b;
        let ratio = BigRational::new(BigInt::from(12) * &c.a, minus_b.clone());
        let oracle_match = if c.n <= DEFAULT_PARTITION_CAP {
            Some(constant_c0_oracle(c.n).map_err(|e| e.to_string())? == minus_b)
        } else {
            None
        };
        let mut quad_fields = (None, None);
        if quad {
            let qa = quad_a(c.n).map_err(|e| e.to_string())?;
            let qb = quad_b(c.n).map_err(|e| e.to_string())?;
            quad_fields = (Some(qa.relative_residual(&c.a)), Some(qb.relative_residual(&c.b)));
        }
        let quad_pass =
            quad_fields.0.map(|r| r < 1e-4).unwrap_or(true) && quad_fields.1.map(|r| r < 1e-4).unwrap_or(true);
        let pass = oracle_match.unwrap_or(true) && quad_pass;
        csv.push_str(&format!(
            "{},{},{},{},{}/{},{},{},{}\n",
            c.n,
            c.a,
            c.b,
            c.c(6).expect("6 is admissible"),
            ratio.numer(),
            ratio.denom(),
            oracle_match.map(|b| b.to_string()).unwrap_or_default(),
            quad_fields.0.map(|r| format!("{r:e}")).unwrap_or_default(),
            quad_fields.1.map(|r| format!("{r:e}")).unwrap_or_default(),
        ));
        items.push(json!({
            "n": c.n,
            "a": big(&c.a),
            "b": big(&c.b),
            "c0": big(c.c(0).expect("admissible")),
            "c6": big(c.c(6).expect("admissible")),
            "ratio": rat(&ratio),
            "ratio_decimal": ratio.to_f64(),
            "oracle_c0_match": oracle_match,
            "quad_a_residual": quad_fields.0,
            "quad_b_residual": quad_fields.1,
            "pass": pass,
        }));
    }
    let envelope =
        ReportEnvelope::build("constants", json!({ "n_max": n_max, "quad": quad }), items);
    let exit = if envelope.summary.failed == 0 { EXIT_PASS } else { EXIT_VERDICT };
    Ok(RunOutcome { envelope, csv: Some(csv), exit })
}

/// `verify-linearity --l-min --l-max [--kprime] [--n-max]`: exact equality
/// of every power sum with its linear prediction, over the whole grid.
/// `corrupt` flips one constant for the harness self-test.
pub fn run_verify_linearity(
    l_min: u64,
    l_max: u64,
    kprime: Option<u32>,
    n_cap: Option<u32>,
    jobs: Option<usize>,
    corrupt: bool,
) -> Result<RunOutcome, String> {
    let ks = weights_for(l_min, l_max, kprime)?;
    let n_top = n_cap.unwrap_or(l_max as u32).min(l_max as u32);
    let mut consts = linearity_constants(n_top.max(1)).map_err(|e| e.to_string())?;
    if corrupt {
        consts[0].b += 1;
    }
    let items: Vec<Vec<Value>> = with_jobs(jobs, || {
        ks.par_iter()
            .map(|&k| {
                let basis = MillerBasis::new(k).expect("validated weight");
                let ell = basis.weight().ell;
                let mut rows = Vec::new();
                for m in 0..=ell as i64 {
                    let n_max = ((ell - m as u64) as u32).min(n_top);
                    let checks = verify_linearity_with(&basis, &consts, m, n_max)
                        .expect("m and n_max in range");
                    let mismatch = checks.iter().find(|r| !r.pass());
                    rows.push(json!({
                        "k": k,
                        "m": m,
                        "n_checked": n_max,
                        "pass": mismatch.is_none(),
                        "first_mismatch": mismatch.map(|r| json!({
                            "n": r.n,
                            "power_sum": big(&r.power_sum),
                            "predicted": big(&r.predicted),
                        })),
                    }));
                }
                rows
            })
            .collect()
    });
    let items: Vec<Value> = items.into_iter().flatten().collect();
    let envelope = ReportEnvelope::build(
        "verify-linearity",
        json!({
            "l_min": l_min, "l_max": l_max, "kprime": kprime, "n_max": n_cap,
            "corrupt": corrupt,
        }),
        items,
    );
    let mut csv = String::from("k,m,n_checked,pass\n");
    for it in &envelope.items {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            it["k"], it["m"], it["n_checked"], it["pass"]
        ));
    }
    let exit = if envelope.summary.failed == 0 { EXIT_PASS } else { EXIT_VERDICT };
    Ok(RunOutcome { envelope, csv: Some(csv), exit })
}

/// `scan-arc --l-min --l-max [--kprime]`: root-location reports across the
/// grid. Informational; the exit code only reflects execution.
pub fn run_scan_arc(
    l_min: u64,
    l_max: u64,
    kprime: Option<u32>,
    jobs: Option<usize>,
) -> Result<RunOutcome, String> {
    let ks = weights_for(l_min, l_max, kprime)?;
    let items: Vec<Vec<Value>> = with_jobs(jobs, || {
        ks.par_iter()
            .map(|&k| {
                let basis = MillerBasis::new(k).expect("validated weight");
                let ell = basis.weight().ell;
                (0..=ell as i64)
                    .map(|m| {
                        let poly = basis.faber(m).expect("m in range");
                        let r = root_report(&poly).expect("nonzero polynomial");
                        json!({
                            "k": k,
                            "m": m,
                            "degree": r.degree,
                            "neg": r.neg,
                            "arc": r.arc,
                            "large": r.large,
                            "nonreal": r.nonreal,
                            "hits_zero": r.hits_zero,
                            "hits_1728": r.hits_1728,
                            "all_on_arc": r.all_on_arc(),
                        })
                    })
                    .collect()
            })
            .collect()
    });
    let items: Vec<Value> = items.into_iter().flatten().collect();
    let mut csv = String::from("k,m,degree,neg,arc,large,nonreal,hits_zero,hits_1728,all_on_arc\n");
    for it in &items {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            it["k"], it["m"], it["degree"], it["neg"], it["arc"], it["large"], it["nonreal"],
            it["hits_zero"], it["hits_1728"], it["all_on_arc"]
        ));
    }
    let envelope = ReportEnvelope::build(
        "scan-arc",
        json!({ "l_min": l_min, "l_max": l_max, "kprime": kprime }),
        items,
    );
    Ok(RunOutcome { envelope, csv: Some(csv), exit: EXIT_PASS })
}

/// Which conjecture `conjectures` scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConjectureKind {
    /// Minimal off-arc index against the tabulated law, plus monotonicity.
    MinM,
    /// No Faber roots in `[1728, oo)`.
    NoLargeRoots,
}

/// `conjectures --which min-m|no-large-roots --l-min --l-max`.
pub fn run_conjectures(
    which: ConjectureKind,
    l_min: u64,
    l_max: u64,
    jobs: Option<usize>,
) -> Result<RunOutcome, String> {
    if l_min > l_max || l_max < 1 {
        return Err(format!("empty range: l_min = {l_min}, l_max = {l_max}"));
    }
    match which {
        ConjectureKind::MinM => {
            let ells: Vec<u64> = (l_min.max(1)..=l_max).collect();
            let items: Vec<Value> = with_jobs(jobs, || {
                ells.par_iter()
                    .map(|&ell| {
                        let k = 12 * ell as i64;
                        let basis = MillerBasis::new(k).expect("validated weight");
                        let scan = min_m_off_arc_with(&basis).expect("scan");
                        let conjectured = conjectured_min_m(ell);
                        let min_matches = match conjectured {
                            Some(c) => scan.min_m == Some(c),
                            None => true, // the table only speaks for ell > 30
                        };
                        let pass = min_matches && scan.monotone;
                        json!({
                            "ell": ell,
                            "k": k,
                            "min_m": scan.min_m,
                            "conjectured_min_m": conjectured,
                            "min_matches": min_matches,
                            "monotone": scan.monotone,
                            "rebounds": scan.rebounds,
                            "boundary_hits": scan.boundary_cases.iter().map(|(m, r)| json!({
                                "m": m, "hits_zero": r.hits_zero, "hits_1728": r.hits_1728,
                            })).collect::<Vec<_>>(),
                            "pass": pass,
                        })
                    })
                    .collect()
            });
            let mut csv = String::from("ell,k,min_m,conjectured_min_m,min_matches,monotone\n");
            for it in &items {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    it["ell"], it["k"], it["min_m"], it["conjectured_min_m"], it["min_matches"],
                    it["monotone"]
                ));
            }
            let envelope = ReportEnvelope::build(
                "conjectures",
                json!({ "which": "min-m", "l_min": l_min, "l_max": l_max }),
                items,
            );
            let exit = if envelope.summary.failed == 0 { EXIT_PASS } else { EXIT_VERDICT };
            Ok(RunOutcome { envelope, csv: Some(csv), exit })
        }
        ConjectureKind::NoLargeRoots => {
            let mut weights = Vec::new();
            for ell in l_min..=l_max {
                for kp in KPRIMES {
                    let k = 12 * ell as i64 + kp as i64;
                    if k >= 4 || k == 0 {
                        weights.push(k);
                    }
                }
            }
            let items: Vec<Value> = with_jobs(jobs, || {
                weights
                    .par_iter()
                    .map(|&k| {
                        let (checked, violations) =
                            crate::realroots::scan_no_large_roots(&[k]).expect("scan");
                        json!({
                            "k": k,
                            "checked": checked,
                            "violations": violations.iter().map(|v| json!({
                                "m": v.m, "count_above": v.count_above, "hit_1728": v.hit_1728,
                            })).collect::<Vec<_>>(),
                            "pass": violations.is_empty(),
                        })
                    })
                    .collect()
            });
            let mut csv = String::from("k,checked,violations,pass\n");
            for it in &items {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    it["k"],
                    it["checked"],
                    it["violations"].as_array().map(|a| a.len()).unwrap_or(0),
                    it["pass"]
                ));
            }
            let envelope = ReportEnvelope::build(
                "conjectures",
                json!({ "which": "no-large-roots", "l_min": l_min, "l_max": l_max }),
                items,
            );
            let exit = if envelope.summary.failed == 0 { EXIT_PASS } else { EXIT_VERDICT };
            Ok(RunOutcome { envelope, csv: Some(csv), exit })
        }
    }
}

/// `dist --k [--m | --c] --bins`: angle samples, the KS verdict against
/// the limit law at `c = m/ell`, and the per-bin count brackets.
pub fn run_dist(
    k: i64,
    m: Option<i64>,
    c: Option<f64>,
    bins: usize,
    ks_threshold: f64,
) -> Result<RunOutcome, String> {
    use std::f64::consts::PI;
    let basis = MillerBasis::new(k).map_err(|e| e.to_string())?;
    let ell = basis.weight().ell;
    let m = match (m, c) {
        (Some(m), _) => m,
        (None, Some(c)) if (0.0..1.0).contains(&c) => (c * ell as f64).round() as i64,
        (None, Some(c)) => return Err(format!("c = {c} outside [0, 1)")),
        (None, None) => return Err("one of --m or --c is required".into()),
    };
    if bins == 0 {
        return Err("bins must be >= 1".into());
    }
    let sample = match arc_sample_with(&basis, m) {
        Ok(s) => s,
        Err(ArcDistError::NotAllOnArc { .. }) => {
            let envelope = ReportEnvelope::build(
                "dist",
                json!({ "k": k, "m": m, "bins": bins }),
                vec![json!({ "k": k, "m": m, "all_on_arc": false, "pass": false })],
            );
            return Ok(RunOutcome { envelope, csv: None, exit: EXIT_PRECONDITION });
        }
        Err(e) => return Err(e.to_string()),
    };
    if sample.thetas.is_empty() {
        return Err(format!("empty sample: degree ell - m = {} is zero", ell as i64 - m));
    }
    let law_c = m as f64 / ell as f64;
    let law = LimitLaw::new(law_c)
        .map_err(|_| format!("law undefined: c = m/ell = {law_c:.4} exceeds 3/pi"))?;
    let ks = ks_distance(&sample, &law).map_err(|e| e.to_string())?;

    // Histogram with equal-width cells and the h-increment bracket per cell
    // (when the counting function is monotone, i.e. m < (2/9) ell).
    let (lo, hi) = (PI / 2.0, 2.0 * PI / 3.0);
    let in_regime = (m as f64) < 2.0 * ell as f64 / 9.0;
    let mut histogram = Vec::with_capacity(bins);
    let mut brackets_pass = true;
    for i in 0..bins {
        let a = lo + (hi - lo) * i as f64 / bins as f64;
        let b = lo + (hi - lo) * (i + 1) as f64 / bins as f64;
        let count = sample
            .thetas
            .iter()
            .filter(|&&t| t >= a && (t < b || (i == bins - 1 && t <= b + 1e-12)))
            .count();
        let bracket = if in_regime {
            let br = raveh_zero_count(k, m, a, b).map_err(|e| e.to_string())?;
            let ok = br.contains(count);
            brackets_pass &= ok;
            Some(json!({
                "predicted": br.predicted, "lo": br.lo, "hi": br.hi, "in_bracket": ok,
            }))
        } else {
            None
        };
        histogram.push(json!({
            "theta_lo": a, "theta_hi": b, "count": count, "bracket": bracket,
        }));
    }
    let ks_pass = ks <= ks_threshold;
    let pass = ks_pass && brackets_pass;
    let item = json!({
        "k": k,
        "m": m,
        "ell": ell,
        "law_c": law_c,
        "count": sample.thetas.len(),
        "ks": ks,
        "ks_threshold": ks_threshold,
        "ks_pass": ks_pass,
        "brackets_in_regime": in_regime,
        "brackets_pass": brackets_pass,
        "histogram": histogram,
        "pass": pass,
    });
    let mut csv = String::from("theta\n");
    for t in &sample.thetas {
        csv.push_str(&format!("{t:.12}\n"));
    }
    let envelope = ReportEnvelope::build(
        "dist",
        json!({ "k": k, "m": m, "bins": bins, "ks_threshold": ks_threshold }),
        vec![item],
    );
    let exit = if pass { EXIT_PASS } else { EXIT_VERDICT };
    Ok(RunOutcome { envelope, csv: Some(csv), exit })
}

/// Renders an envelope as aligned plain text.
pub fn render_text(env: &ReportEnvelope) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} ({} v{})\n", env.command, env.schema, env.version));
    out.push_str(&format!("config: {}\n", env.config));
    for item in &env.items {
        let obj: BTreeMap<String, &Value> = item
            .as_object()
            .map(|o| o.iter().map(|(k, v)| (k.clone(), v)).collect())
            .unwrap_or_default();
        let line: Vec<String> = obj
            .iter()
            .filter(|(_, v)| !v.is_null())
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.push_str(&format!(
        "summary: checked={} passed={} failed={}\n",
        env.summary.checked, env.summary.passed, env.summary.failed
    ));
    out
}
