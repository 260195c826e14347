//! Command-line front end. Every command builds an ordered JSON report; CSV
//! output flattens the report's `rows` (or the report itself) into a table.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::asymptotics::{
    log_det_report, product_formula_check, rescaled_theta_gap, thm11_residuals, thm13_residuals,
    ResidualSeries, TorusFamily,
};
use crate::bundle_graph::{TorusBundleSpec, UnitWeight};
use crate::crsf::{kenyon_check, DEFAULT_MAX_EDGES};
use crate::error::{Error, Result};
use crate::heat_theta::{
    theta_continuous, theta_discrete, theta_discrete_bessel, ContinuousTorusSpec, ThetaForm,
};
use crate::spec_file::{load_spec, SpecDocument};
use crate::special::QuadratureSpec;
use crate::zeta::{
    c_d_with, kronecker_deriv0, zeta_eh, zeta_eh_deriv0_with, zeta_eh_split, zeta_gn,
    zeta_gn_deriv0, zeta_zd_deriv0_with, zeta_zd_with, ZetaEvaluation, ZetaMethod,
};

#[derive(Debug, Parser)]
#[command(name = "bundle-lab", version, about = "Bundle Laplacians on discrete tori: determinants, theta and zeta functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads for per-n and per-t loops (0 = rayon default).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Absolute quadrature tolerance; the relative one is 10x smaller than 1.
    #[arg(long, global = true, default_value_t = 1e-13)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// log det of the torus bundle Laplacian (eigenvalues, plus LU when small).
    Detlog(TorusArgs),
    /// Compare the CRSF expansion with the dense determinant.
    CrsfCheck {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
        max_edges: usize,
    },
    /// Zeta functions and lattice constants.
    Zeta {
        #[arg(value_enum)]
        kind: ZetaKind,
        #[command(flatten)]
        params: ZetaArgs,
    },
    /// Residual tables for the large-torus asymptotics.
    Asymptotics {
        #[arg(value_enum)]
        kind: AsymptoticsKind,
        #[command(flatten)]
        params: FamilyArgs,
    },
    /// Theta function table over a grid of t.
    Theta {
        #[command(flatten)]
        torus: TorusArgs,
        /// Side ratios; selects the continuous torus when --a is absent.
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        ts: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaKind {
    Eh,
    EhDeriv0,
    Kronecker,
    Zd,
    Gn,
    Cd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsymptoticsKind {
    Thm11,
    Thm13,
    ThetaGap,
    ProductFormula,
}

#[derive(Debug, Clone, Args)]
pub struct TorusArgs {
    /// Side lengths a_1,…,a_d.
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<usize>,
    /// Holonomies λ_i in turns (default 0).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lambda: Vec<f64>,
    /// Torus spec document, instead of --a/--lambda.
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ZetaArgs {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Imaginary part of s (gn only).
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub s_im: f64,
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<usize>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lambda: Vec<f64>,
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub d: Option<usize>,
    /// Side multipliers m_i, a_i(n) = m_i n (default 1); for product-formula
    /// the factors of the big torus.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    /// Holonomies of the family (default 1/2 in every direction).
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub ns: Vec<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Time for theta-gap (default 1).
    #[arg(long)]
    pub t: Option<f64>,
    /// Side of the small torus for product-formula.
    #[arg(long)]
    pub n: Option<usize>,
    /// Holonomy values for product-formula: 1, -1, i, -i, or @turns.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub z: Vec<String>,
}

/// Parse, execute and render; the returned text is the whole report.
pub fn run(cli: &Cli) -> Result<String> {
    if !(cli.tol > 0.0) {
        return Err(Error::invalid("--tol must be positive"));
    }
    let report = if cli.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build()
            .map_err(|e| Error::invalid(format!("cannot build thread pool: {e}")))?;
        pool.install(|| execute(cli))?
    } else {
        execute(cli)?
    };
    Ok(match cli.format {
        Format::Json => render_json(&report),
        Format::Csv => render_csv(&report),
    })
}

/// Entry point for the binary: returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let out = run(&cli).and_then(|text| match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match out {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("bundle-lab: {e}");
            e.exit_code()
        }
    }
}

fn quadrature(cli: &Cli) -> QuadratureSpec {
    QuadratureSpec::with_tolerances(cli.tol, (10.0 * cli.tol).min(1e-6))
}

fn execute(cli: &Cli) -> Result<Map<String, Value>> {
    match &cli.command {
        Command::Detlog(t) => cmd_detlog(&torus_from_args(t)?),
        Command::CrsfCheck { file, max_edges } => cmd_crsf_check(&load_spec(file)?, *max_edges),
        Command::Zeta { kind, params } => cmd_zeta(*kind, params, &quadrature(cli)),
        Command::Asymptotics { kind, params } => cmd_asymptotics(*kind, params),
        Command::Theta { torus, alpha, ts } => cmd_theta(torus, alpha, ts),
    }
}

fn torus_from_parts(a: &[usize], lambda: &[f64], file: Option<&PathBuf>) -> Result<TorusBundleSpec> {
    if let Some(path) = file {
        return match load_spec(path)? {
            SpecDocument::Torus(t) => Ok(t),
            SpecDocument::Graph(_) => Err(Error::invalid("expected a torus document, got a graph")),
        };
    }
    if a.is_empty() {
        return Err(Error::invalid("give the torus with --a (and --lambda) or --weights-file"));
    }
    let lambda = if lambda.is_empty() { vec![0.0; a.len()] } else { lambda.to_vec() };
    TorusBundleSpec::with_holonomies(a.to_vec(), &lambda)
}

fn torus_from_args(t: &TorusArgs) -> Result<TorusBundleSpec> {
    torus_from_parts(&t.a, &t.lambda, t.weights_file.as_ref())
}

fn report(kind: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("command".into(), json!(kind));
    m
}

pub fn cmd_detlog(spec: &TorusBundleSpec) -> Result<Map<String, Value>> {
    let r = log_det_report(spec)?;
    let mut m = report("detlog");
    m.insert("sides".into(), json!(spec.sides()));
    m.insert("eigen_logdet".into(), json!(r.eigen_logdet));
    m.insert("lu_logdet".into(), json!(r.lu_logdet));
    m.insert("holonomies".into(), json!(r.holonomies));
    Ok(m)
}

pub fn cmd_crsf_check(doc: &SpecDocument, max_edges: usize) -> Result<Map<String, Value>> {
    let k = kenyon_check(&doc.graph(), max_edges)?;
    let mut m = report("crsf-check");
    m.insert("crsf_count".into(), json!(k.crsf_count));
    m.insert("kenyon_sum".into(), json!(k.kenyon_sum));
    m.insert("det".into(), json!(k.det));
    m.insert("abs_err".into(), json!(k.abs_error));
    Ok(m)
}

fn zeta_report(kind: &str, e: ZetaEvaluation) -> Map<String, Value> {
    let mut m = report("zeta");
    m.insert("kind".into(), json!(kind));
    m.insert("value".into(), json!(e.value));
    m.insert("error_estimate".into(), json!(e.error_estimate));
    m.insert("method".into(), serde_json::to_value(e.method).unwrap_or(Value::Null));
    m
}

fn continuous_from(d: Option<usize>, alpha: &[f64], lambda: &[f64]) -> Result<ContinuousTorusSpec> {
    let dim = d.unwrap_or(lambda.len().max(alpha.len()));
    let alpha = if alpha.is_empty() { vec![1.0; dim] } else { alpha.to_vec() };
    let lambda = if lambda.is_empty() { vec![0.0; dim] } else { lambda.to_vec() };
    if alpha.len() != dim || lambda.len() != dim {
        return Err(Error::invalid(format!("--alpha and --lambda must have --d = {dim} entries")));
    }
    ContinuousTorusSpec::new(alpha, lambda)
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::invalid(format!("missing {flag}")))
}

pub fn cmd_zeta(kind: ZetaKind, p: &ZetaArgs, quad: &QuadratureSpec) -> Result<Map<String, Value>> {
    match kind {
        ZetaKind::Cd => Ok(zeta_report("cd", c_d_with(need(p.d, "--d")?, quad)?)),
        ZetaKind::Zd => {
            let d = need(p.d, "--d")?;
            let s = need(p.s, "--s")?;
            let mut m = zeta_report("zd", zeta_zd_with(s, d, quad)?);
            m.insert("deriv0".into(), json!(zeta_zd_deriv0_with(d, quad)?.value));
            Ok(m)
        }
        ZetaKind::Eh => {
            let spec = continuous_from(p.d, &p.alpha, &p.lambda)?;
            let s = need(p.s, "--s")?;
            let e = if s - 0.5 * spec.dimension() as f64 >= 0.25 {
                zeta_eh(s, &spec)?
            } else {
                zeta_eh_split(s, &spec, quad)?
            };
            Ok(zeta_report("eh", e))
        }
        ZetaKind::EhDeriv0 => {
            let spec = continuous_from(p.d, &p.alpha, &p.lambda)?;
            Ok(zeta_report("eh-deriv0", zeta_eh_deriv0_with(&spec, quad)?))
        }
        ZetaKind::Kronecker => {
            let spec = continuous_from(Some(2), &p.alpha, &p.lambda)?;
            let (a, l) = (spec.alpha(), spec.lambda());
            let value = kronecker_deriv0(a[0], a[1], l[0], l[1])?;
            Ok(zeta_report(
                "kronecker",
                ZetaEvaluation { value, error_estimate: 1e-15 * value.abs().max(1.0), method: ZetaMethod::KroneckerD2 },
            ))
        }
        ZetaKind::Gn => {
            let spec = torus_from_parts(&p.a, &p.lambda, p.weights_file.as_ref())?;
            let s = Complex64::new(need(p.s, "--s")?, p.s_im);
            let z = zeta_gn(s, &spec)?;
            let mut m = report("zeta");
            m.insert("kind".into(), json!("gn"));
            m.insert("value".into(), json!(z.re));
            m.insert("value_im".into(), json!(z.im));
            m.insert("deriv0".into(), json!(zeta_gn_deriv0(&spec)?));
            m.insert("error_estimate".into(), json!(1e-15 * z.norm() * spec.vertex_count() as f64));
            m.insert("method".into(), json!("eigensum"));
            Ok(m)
        }
    }
}

fn family_from(p: &FamilyArgs) -> Result<TorusFamily> {
    let d = p.d.unwrap_or(p.lambda.len().max(p.m.len()));
    if d == 0 {
        return Err(Error::invalid("give --d, --lambda or --m"));
    }
    let m = if p.m.is_empty() { vec![1; d] } else { p.m.clone() };
    let lambda = if p.lambda.is_empty() { vec![0.5; d] } else { p.lambda.clone() };
    if m.len() != d || lambda.len() != d {
        return Err(Error::invalid(format!("--m and --lambda must have --d = {d} entries")));
    }
    TorusFamily::scaled(m, lambda)
}

/// `1`, `-1`, `i`, `-i`, a real number of modulus one, or `@x` for e^{2πix}.
pub fn parse_unit(token: &str) -> Result<UnitWeight> {
    let t = token.trim();
    let v = match t {
        "i" | "+i" => Complex64::new(0.0, 1.0),
        "-i" => Complex64::new(0.0, -1.0),
        _ if t.starts_with('@') => {
            let turns: f64 = t[1..].parse().map_err(|_| Error::invalid(format!("bad angle {t}")))?;
            return Ok(UnitWeight::from_turns(turns));
        }
        _ => Complex64::new(t.parse().map_err(|_| Error::invalid(format!("bad unit value {t}")))?, 0.0),
    };
    UnitWeight::new(v)
}

fn residual_report(kind: &str, family: &TorusFamily, series: &ResidualSeries) -> Map<String, Value> {
    let mut m = report("asymptotics");
    m.insert("kind".into(), json!(kind));
    m.insert("alpha".into(), json!(family.limit().alpha()));
    m.insert("lambda".into(), json!(family.limit().lambda()));
    let rows: Vec<Value> = series
        .ns
        .iter()
        .zip(&series.residuals)
        .map(|(n, r)| json!({"n": n, "residual": r}))
        .collect();
    m.insert("rows".into(), Value::Array(rows));
    m.insert("slope".into(), json!(series.slope));
    m.insert("strictly_decreasing".into(), json!(series.is_strictly_decreasing()));
    m
}

pub fn cmd_asymptotics(kind: AsymptoticsKind, p: &FamilyArgs) -> Result<Map<String, Value>> {
    match kind {
        AsymptoticsKind::Thm11 => {
            let f = family_from(p)?;
            Ok(residual_report("thm11", &f, &thm11_residuals(&f, &p.ns)?))
        }
        AsymptoticsKind::Thm13 => {
            let f = family_from(p)?;
            let mut m = residual_report("thm13", &f, &thm13_residuals(&f, need(p.s, "--s")?, &p.ns)?);
            m.insert("s".into(), json!(p.s));
            Ok(m)
        }
        AsymptoticsKind::ThetaGap => {
            let f = family_from(p)?;
            let t = p.t.unwrap_or(1.0);
            let gaps = p
                .ns
                .par_iter()
                .map(|&n| rescaled_theta_gap(&f, n, t))
                .collect::<Result<Vec<f64>>>()?;
            let mut m = report("asymptotics");
            m.insert("kind".into(), json!("theta-gap"));
            m.insert("t".into(), json!(t));
            let rows: Vec<Value> =
                p.ns.iter().zip(&gaps).map(|(n, g)| json!({"n": n, "gap": g})).collect();
            m.insert("rows".into(), Value::Array(rows));
            Ok(m)
        }
        AsymptoticsKind::ProductFormula => {
            let n = need(p.n, "--n")?;
            let z = p.z.iter().map(|s| parse_unit(s)).collect::<Result<Vec<_>>>()?;
            let c = product_formula_check(&p.m, n, &z)?;
            let mut m = report("asymptotics");
            m.insert("kind".into(), json!("product-formula"));
            m.insert("m".into(), json!(p.m));
            m.insert("n".into(), json!(n));
            m.insert("lhs".into(), json!(c.lhs));
            m.insert("rhs".into(), json!(c.rhs));
            m.insert("relative_error".into(), json!(c.relative_error()));
            Ok(m)
        }
    }
}

pub fn cmd_theta(torus: &TorusArgs, alpha: &[f64], ts: &[f64]) -> Result<Map<String, Value>> {
    let mut m = report("theta");
    let rows: Vec<Value> = if torus.a.is_empty() && torus.weights_file.is_none() {
        let spec = continuous_from(None, alpha, &torus.lambda)?;
        m.insert("torus".into(), json!("continuous"));
        ts.par_iter()
            .map(|&t| {
                Ok(json!({
                    "t": t,
                    "spectral": theta_continuous(&spec, t, ThetaForm::Spectral)?,
                    "dual": theta_continuous(&spec, t, ThetaForm::Dual)?,
                }))
            })
            .collect::<Result<_>>()?
    } else {
        let spec = torus_from_args(torus)?;
        m.insert("torus".into(), json!("discrete"));
        ts.par_iter()
            .map(|&t| {
                if !(t >= 0.0) {
                    return Err(Error::invalid(format!("t must be >= 0, got {t}")));
                }
                Ok(json!({
                    "t": t,
                    "theta": theta_discrete(&spec, t),
                    "bessel_form": theta_discrete_bessel(&spec, t)?,
                }))
            })
            .collect::<Result<_>>()?
    };
    m.insert("rows".into(), Value::Array(rows));
    Ok(m)
}

pub fn render_json(report: &Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(report).unwrap_or_default();
    s.push('\n');
    s
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.16e}"),
            _ => n.to_string(),
        },
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Array(a) => a.iter().map(csv_cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => csv_cell(&Value::String(v.to_string())),
    }
}

/// Rows of the report as CSV: the `rows` objects when present, otherwise
/// the scalar fields as a single row. Floats carry 17 significant digits.
pub fn render_csv(report: &Map<String, Value>) -> String {
    let rows: Vec<Map<String, Value>> = match report.get("rows") {
        Some(Value::Array(rows)) => rows.iter().filter_map(|r| r.as_object().cloned()).collect(),
        _ => vec![report.clone()],
    };
    let Some(first) = rows.first() else {
        return String::new();
    };
    let columns: Vec<&String> = first.keys().collect();
    let mut out = columns.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(",");
    out.push('\n');
    for r in &rows {
        let line: Vec<String> = columns.iter().map(|c| r.get(*c).map(csv_cell).unwrap_or_default()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_units() {
        assert_eq!(parse_unit("1").unwrap(), UnitWeight::ONE);
        assert!((parse_unit("i").unwrap().value() - Complex64::new(0.0, 1.0)).norm() < 1e-16);
        assert!((parse_unit("-1").unwrap().turns() - 0.5).abs() < 1e-15);
        assert!((parse_unit("@0.25").unwrap().turns() - 0.25).abs() < 1e-15);
        assert!(parse_unit("2").is_err());
    }

    #[test]
    fn csv_floats_have_seventeen_digits() {
        let mut m = Map::new();
        m.insert("x".into(), json!(0.1));
        m.insert("n".into(), json!(3));
        assert_eq!(render_csv(&m), "x,n\n1.0000000000000001e-1,3\n");
    }
}
