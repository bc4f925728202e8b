use clap::{Parser, Subcommand, ValueEnum};
use heun_core::acceptance::run_all;
use heun_core::error::HeunError;
use heun_core::heun::{boundary_closed_form, construct, heun_residual, zeros_in_unit_interval, HPTIndex};
use heun_core::numeric::{fd_spectrum, RadialGrid};
use heun_core::poly::ExactPoly;
use heun_core::rational::ExactRational;
use heun_core::spectral::{bound_states, potential_value_r, AEHForm, Family};
use heun_core::susy::{aprime_partner, heine_from_kappa1, partner_eigenfunction, partner_residual, PartnerSpec};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const SCHEMA: &str = "heun-ladder/1";

/// Exact Heun-polynomial ladders for the hyperbolic Poschl-Teller problem,
/// SUSY partner construction, and a floating-point verification layer.
#[derive(Parser)]
#[command(name = "heun-ladder", version)]
struct Cli {
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    A,
    Aprime,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::Aprime => Family::APrime,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Construct the degree-n polynomial for (s, t, kappa) and report its
    /// exact coefficients, boundary value, residual status, and zero count.
    Hp {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        /// Exact rational, "p/q" or integer.
        #[arg(long)]
        kappa: String,
    },
    /// Build a SUSY partner seed: either the b-type seed at kappa1, or a
    /// t-plus seed of family a / a' at index m (optionally quantized at kappa).
    Partner {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        /// b-type seed energy parameter kappa1 > t - 1 ("p/q" or integer).
        #[arg(long, conflicts_with_all = ["family", "m"])]
        kappa1: Option<String>,
        /// t-plus factorization family.
        #[arg(long, requires = "m")]
        family: Option<FamilyArg>,
        /// t-plus cofactor index m.
        #[arg(long, requires = "family")]
        m: Option<u32>,
        /// Optional kappa at which to quantize the t-plus partner.
        #[arg(long, requires = "family")]
        kappa: Option<String>,
    },
    /// Construct the partner-quantizing polynomial from a Wronskian of two
    /// seed polynomials at distinct energy parameters.
    Heine {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        kappa: String,
        #[arg(long)]
        kappa1: String,
    },
    /// Finite-difference spectrum of V_{s,t} with Richardson extrapolation,
    /// compared against the exact bound-state energies.
    Spectrum {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[arg(long, default_value_t = 0.0)]
        r_min: f64,
        #[arg(long, default_value_t = 14.0)]
        r_max: f64,
        /// Number of grid points on the coarse grid.
        #[arg(long, default_value_t = 8000)]
        points: usize,
        /// Acceptance tolerance per level after extrapolation.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Tabulate V_{s,t}(r) (and optionally the b-type partner potential)
    /// as CSV with columns r,V[,V1] or as JSON.
    Potential {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        /// Also emit the partner potential for the b-type seed at kappa1.
        #[arg(long)]
        kappa1: Option<String>,
        #[arg(long, default_value_t = 0.05)]
        r_min: f64,
        #[arg(long, default_value_t = 8.0)]
        r_max: f64,
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Run a module invariant suite and emit a pass/fail manifest.
    Verify {
        /// One of: all, ladder, tridiagonal, heine, numeric, analytic.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Run the full release gate and emit its manifest.
    Acceptance,
}

enum CliError {
    Usage(String),
    Identity(String),
}

impl From<HeunError> for CliError {
    fn from(e: HeunError) -> Self {
        match e {
            HeunError::IdentityViolation(_) | HeunError::InternalInconsistency(_) => {
                CliError::Identity(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn parse_rational(text: &str) -> Result<ExactRational, CliError> {
    let parse_int = |p: &str| {
        p.trim()
            .parse::<i64>()
            .map_err(|_| CliError::Usage(format!("invalid rational component {p:?}")))
    };
    match text.split_once('/') {
        None => Ok(ExactRational::from_int(parse_int(text)?)),
        Some((p, q)) => {
            let q = parse_int(q)?;
            if q == 0 {
                return Err(CliError::Usage("zero denominator".into()));
            }
            Ok(ExactRational::ratio(parse_int(p)?, q))
        }
    }
}

fn coeff_strings(p: &ExactPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn aeh_json(form: &AEHForm) -> Value {
    json!({
        "a": form.a.to_string(),
        "b": form.b.to_string(),
        "c": form.c.to_string(),
        "poly": coeff_strings(&form.poly),
        "denom": form.denom.as_ref().map(coeff_strings),
    })
}

fn worker_cap() -> Result<usize, CliError> {
    match std::env::var("HEUN_LADDER_THREADS") {
        Err(_) => Ok(1),
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|n| *n >= 1)
            .ok_or_else(|| {
                CliError::Usage(format!("HEUN_LADDER_THREADS must be a positive integer, got {v:?}"))
            }),
    }
}

fn cmd_hp(s: u32, t: u32, kappa: &str) -> Result<Value, CliError> {
    let k = parse_rational(kappa)?;
    let idx = HPTIndex::new(s, t)?;
    let hp = construct(s, t, &k)?;
    let residual_ok = heun_residual(&hp).is_zero();
    if !residual_ok {
        return Err(CliError::Identity("constructed polynomial fails its defining equation".into()));
    }
    Ok(json!({
        "schema": SCHEMA,
        "s": s,
        "t": t,
        "n": idx.n(),
        "kappa": k.to_string(),
        "coefficients": coeff_strings(&hp.poly),
        "boundary_value": boundary_closed_form(idx, &k).to_string(),
        "residual_ok": residual_ok,
        "zero_count": zeros_in_unit_interval(&hp)?,
    }))
}

fn cmd_heine(s: u32, t: u32, kappa: &str, kappa1: &str) -> Result<Value, CliError> {
    let k = parse_rational(kappa)?;
    let k1 = parse_rational(kappa1)?;
    let h = heine_from_kappa1(s, t, &k, &k1)?;
    Ok(json!({
        "schema": SCHEMA,
        "s": s,
        "t": t,
        "kappa": k.to_string(),
        "kappa1": k1.to_string(),
        "degree": h.poly.degree(),
        "coefficients": coeff_strings(&h.poly),
        "scale": h.scale.to_string(),
        "provenance": h.provenance,
    }))
}

fn cmd_partner(
    s: u32,
    t: u32,
    kappa1: Option<&str>,
    family: Option<FamilyArg>,
    m: Option<u32>,
    kappa: Option<&str>,
) -> Result<Value, CliError> {
    match (kappa1, family, m) {
        (Some(k1), None, None) => {
            let k1 = parse_rational(k1)?;
            let spec = PartnerSpec::b_type(s, t, &k1)?;
            let residual_tol = 1e-8;
            let mut levels = Vec::new();
            for state in bound_states(s, t)? {
                let (hi, phi) = partner_eigenfunction(s, t, &k1, state.v)?;
                let mut worst = 0.0f64;
                for i in 0..50 {
                    let r = 0.1 + 7.9 * (i as f64 + 0.5) / 50.0;
                    let res = partner_residual(&spec, &phi, state.energy.to_f64(), r)?;
                    let scale = spec.partner_potential_r(r)?.abs().max(1.0);
                    worst = worst.max((res / scale).abs());
                }
                if worst > residual_tol {
                    return Err(CliError::Identity(format!(
                        "partner eigenfunction residual {worst:e} at level {}",
                        state.v
                    )));
                }
                levels.push(json!({
                    "v": state.v,
                    "kappa_v": state.kappa_v.to_string(),
                    "energy": state.energy.to_string(),
                    "numerator_coefficients": coeff_strings(&hi.poly),
                    "max_residual": worst,
                    "tol": residual_tol,
                }));
            }
            Ok(json!({
                "schema": SCHEMA,
                "s": s,
                "t": t,
                "kind": {"b_type": {"kappa1": k1.to_string()}},
                "ff": aeh_json(&spec.ff),
                "levels": levels,
            }))
        }
        (None, Some(f), Some(m)) => {
            let spec = PartnerSpec::t_plus(s, t, f.into(), m)?;
            let quantized = match kappa {
                None => Value::Null,
                Some(k) => {
                    let k = parse_rational(k)?;
                    let (hi, form) = aprime_partner(s, t, f.into(), m, &k)?;
                    json!({
                        "kappa": k.to_string(),
                        "degree": hi.poly.degree(),
                        "coefficients": coeff_strings(&hi.poly),
                        "scale": hi.scale.to_string(),
                        "solution": aeh_json(&form),
                    })
                }
            };
            Ok(json!({
                "schema": SCHEMA,
                "s": s,
                "t": t,
                "kind": {"t_plus": {"family": if matches!(f, FamilyArg::A) {"a"} else {"a'"}, "m": m}},
                "ff": aeh_json(&spec.ff),
                "quantized": quantized,
            }))
        }
        _ => Err(CliError::Usage(
            "give either --kappa1 (b-type) or --family with --m (t-plus)".into(),
        )),
    }
}

fn cmd_spectrum(s: u32, t: u32, r_min: f64, r_max: f64, points: usize, tol: f64) -> Result<Value, CliError> {
    let states = bound_states(s, t)?;
    let refs: Vec<f64> = states.iter().map(|b| b.energy.to_f64()).collect();
    if refs.is_empty() {
        return Err(CliError::Usage(format!("V_{{{s},{t}}} has no bound states")));
    }
    let grid = RadialGrid::new(r_min, r_max, points)?;
    let report = fd_spectrum(|r| potential_value_r(s, t, r).unwrap(), grid, refs.len(), &refs);
    let ok = !report.truncated && report.errors.iter().all(|e| *e <= tol);
    Ok(json!({
        "schema": SCHEMA,
        "s": s,
        "t": t,
        "grid": {"r_min": r_min, "r_max": r_max, "points": points},
        "reference_exact": states.iter().map(|b| b.energy.to_string()).collect::<Vec<_>>(),
        "reference": report.reference,
        "eigenvalues": report.eigenvalues,
        "richardson": report.richardson,
        "errors": report.errors,
        "tol": tol,
        "within_tol": ok,
    }))
}

fn cmd_potential(
    s: u32,
    t: u32,
    kappa1: Option<&str>,
    r_min: f64,
    r_max: f64,
    points: usize,
    format: OutputFormat,
) -> Result<String, CliError> {
    if points < 2 || !(r_max > r_min) || r_min <= 0.0 {
        return Err(CliError::Usage("need 0 < r_min < r_max and at least 2 points".into()));
    }
    let partner = match kappa1 {
        None => None,
        Some(k1) => Some(PartnerSpec::b_type(s, t, &parse_rational(k1)?)?),
    };
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let r = r_min + (r_max - r_min) * i as f64 / (points - 1) as f64;
        let v = potential_value_r(s, t, r)?;
        let v1 = partner.as_ref().map(|p| p.partner_potential_r(r)).transpose()?;
        rows.push((r, v, v1));
    }
    match format {
        OutputFormat::Csv => {
            let mut out = String::new();
            out.push_str(if partner.is_some() { "r,V,V1\n" } else { "r,V\n" });
            for (r, v, v1) in rows {
                match v1 {
                    Some(v1) => out.push_str(&format!("{r:.12e},{v:.12e},{v1:.12e}\n")),
                    None => out.push_str(&format!("{r:.12e},{v:.12e}\n")),
                }
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|(r, v, v1)| match v1 {
                    Some(v1) => json!([r, v, v1]),
                    None => json!([r, v]),
                })
                .collect();
            let doc = json!({
                "schema": SCHEMA,
                "s": s,
                "t": t,
                "columns": if partner.is_some() { vec!["r", "V", "V1"] } else { vec!["r", "V"] },
                "rows": rows,
                "tol": 0.0,
            });
            Ok(format!("{:#}\n", doc))
        }
    }
}

fn suite_ids(suite: &str) -> Result<Vec<u32>, CliError> {
    Ok(match suite {
        "all" => (1..=15).collect(),
        "ladder" => vec![1, 2, 3, 4, 5, 6],
        "tridiagonal" => vec![7],
        "heine" => vec![8, 9, 10, 11],
        "numeric" => vec![12, 13],
        "analytic" => vec![14, 15],
        other => {
            return Err(CliError::Usage(format!(
                "unknown suite {other:?}; expected all, ladder, tridiagonal, heine, numeric, or analytic"
            )))
        }
    })
}

const CRITERION_NAMES: [&str; 15] = [
    "dual-construction",
    "defining-equation-residual",
    "ladder-quartet",
    "exact-factorizations",
    "boundary-closed-form",
    "zero-count-windows",
    "degenerate-tridiagonal",
    "heine-construction",
    "generator-identity",
    "ground-seed-specialization",
    "tplus-partners",
    "fd-spectra",
    "partner-isospectrality",
    "hypergeometric-bridge",
    "radial-chain",
];

fn cmd_verify(suite: &str) -> Result<(Value, bool), CliError> {
    let ids = suite_ids(suite)?;
    let results = run_all();
    let mut groups = Vec::new();
    let mut all_ok = true;
    for r in results.iter().filter(|r| ids.contains(&r.id)) {
        all_ok &= r.passed;
        groups.push(json!({
            "name": CRITERION_NAMES[(r.id - 1) as usize],
            "passed": r.passed,
            "detail": r.detail,
            "seconds": r.seconds,
        }));
    }
    let doc = json!({
        "schema": SCHEMA,
        "suite": suite,
        "groups": groups,
        "passed": all_ok,
    });
    Ok((doc, all_ok))
}

fn cmd_acceptance() -> (Value, bool) {
    let results = run_all();
    let all_ok = results.iter().all(|r| r.passed);
    let items: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "name": CRITERION_NAMES[(r.id - 1) as usize],
                "anchor": r.anchor,
                "passed": r.passed,
                "detail": r.detail,
                "seconds": r.seconds,
            })
        })
        .collect();
    (
        json!({
            "schema": SCHEMA,
            "criteria": items,
            "passed": all_ok,
        }),
        all_ok,
    )
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match output {
        None => {
            print!("{text}");
            std::io::stdout().flush().ok();
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let _workers = worker_cap()?;
    let (text, ok) = match cli.cmd {
        Cmd::Hp { s, t, ref kappa } => (format!("{:#}\n", cmd_hp(s, t, kappa)?), true),
        Cmd::Heine { s, t, ref kappa, ref kappa1 } => {
            (format!("{:#}\n", cmd_heine(s, t, kappa, kappa1)?), true)
        }
        Cmd::Partner { s, t, ref kappa1, family, m, ref kappa } => (
            format!(
                "{:#}\n",
                cmd_partner(s, t, kappa1.as_deref(), family, m, kappa.as_deref())?
            ),
            true,
        ),
        Cmd::Spectrum { s, t, r_min, r_max, points, tol } => {
            let doc = cmd_spectrum(s, t, r_min, r_max, points, tol)?;
            let ok = doc["within_tol"].as_bool().unwrap_or(false);
            (format!("{:#}\n", doc), ok)
        }
        Cmd::Potential { s, t, ref kappa1, r_min, r_max, points, format } => (
            cmd_potential(s, t, kappa1.as_deref(), r_min, r_max, points, format)?,
            true,
        ),
        Cmd::Verify { ref suite } => {
            let (doc, ok) = cmd_verify(suite)?;
            (format!("{:#}\n", doc), ok)
        }
        Cmd::Acceptance => {
            let (doc, ok) = cmd_acceptance();
            (format!("{:#}\n", doc), ok)
        }
    };
    emit(cli.output.as_ref(), &text)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Identity("one or more checks failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Help/version requests are success; anything else is a usage error.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Identity(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
