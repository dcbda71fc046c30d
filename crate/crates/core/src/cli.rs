//! `ckernels` front end.
//!
//! Settings come from flags, then an optional TOML file (`--config`, same
//! keys as the long flags), then built-in defaults. Output goes to `--out`
//! or stdout. Exit codes: 0 success, 1 check failure, 2 usage error,
//! 3 numeric non-convergence.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    classify_smoothness, feynman_table_validated, fit_expansion, log_grid, ExpansionBasis, FitReport, RadialSamples,
    SmoothnessClass,
};
use crate::contraction::*;
use crate::error::Error;
use crate::kernels::{eval_kernel, KernelPoint, KernelSpec, Vec3};
use crate::quadrature::QuadConfig;
use crate::verify::{run_suite, Status, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    Fig1,
    Contract,
    Fit,
    Classify,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Quantity tabulated by `contract`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Two-dimensional contracted Coulomb kernel against `rho`.
    Example2,
    /// Mollified integral `I_beta(d)` and its `beta -> inf` limit against `d`.
    AppendixA,
    /// Regularized diagonal kernel `Psi_beta(r)`.
    Psi0,
    /// Monopole singular term against `|a|`.
    I1,
    /// Smooth remainder at `a = (t, 0, 0)`, `b = (t/2, 0, 0)`.
    I2,
    /// The `--kernel` model kernel at separation `r` along the x axis.
    Kernel,
}

#[derive(Debug, Default, Parser, Deserialize)]
#[command(name = "ckernels", version, about = "Contracted-kernel numerics: verification, figure data, fits")]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Args {
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    /// Mollifier width for psi0 and appendix-a.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long)]
    pub tol_abs: Option<f64>,
    #[arg(long)]
    pub max_evals: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    #[serde(default)]
    pub include_slow: bool,
    #[arg(long)]
    pub c12: Option<f64>,
    /// CSV of `(r, value)` rows for fit and classify.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// KernelSpec as inline JSON or a path to a JSON file.
    #[arg(long)]
    pub kernel: Option<String>,
    #[arg(long, value_enum)]
    pub quantity: Option<Quantity>,
    /// Expansion basis for fit, e.g. `ln,1,r,r^2`.
    #[arg(long)]
    pub basis: Option<String>,
    /// Monte Carlo samples per radius for the slow checks.
    #[arg(long)]
    pub mc_samples: Option<usize>,
    /// TOML file with defaults for any of the above.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Fully resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub tolerances: QuadConfig,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub include_slow: bool,
    pub beta: f64,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub points: Option<usize>,
    pub c12: f64,
    pub input: Option<PathBuf>,
    pub kernel: Option<KernelSpec>,
    pub quantity: Option<Quantity>,
    pub basis: Option<String>,
    pub mc_samples: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{line}: {msg}", path.display())]
    Parse { path: PathBuf, line: u64, msg: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Numeric(Error::NonConvergence { .. }) => 3,
            CliError::Numeric(Error::InvalidConfig(_) | Error::Precondition(_) | Error::Domain { .. }) => 2,
            CliError::Numeric(_) => 1,
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

impl RunConfig {
    /// Merges flags over the config file over defaults.
    pub fn resolve(args: Args) -> CliResult<RunConfig> {
        let file = match &args.config {
            Some(p) => {
                let text = fs::read_to_string(p).map_err(io_err(p))?;
                toml::from_str::<Args>(&text).map_err(|e| CliError::Parse {
                    path: p.clone(),
                    line: e.span().map(|s| text[..s.start].matches('\n').count() as u64 + 1).unwrap_or(0),
                    msg: e.message().to_string(),
                })?
            }
            None => Args::default(),
        };
        let command = args
            .command
            .or(file.command)
            .ok_or_else(|| CliError::Usage("--command is required (verify, fig1, contract, fit, classify, table)".into()))?;
        let defaults = QuadConfig::default();
        let tolerances = QuadConfig {
            rel_tol: args.tol_rel.or(file.tol_rel).unwrap_or(defaults.rel_tol),
            abs_tol: args.tol_abs.or(file.tol_abs).unwrap_or(defaults.abs_tol),
            max_evals: args.max_evals.or(file.max_evals).unwrap_or(defaults.max_evals),
        };
        tolerances.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let default_format = match command {
            Command::Fig1 | Command::Contract => Format::Csv,
            _ => Format::Json,
        };
        let kernel = match args.kernel.or(file.kernel) {
            Some(k) => Some(parse_kernel(&k)?),
            None => None,
        };
        let cfg = RunConfig {
            command,
            tolerances,
            seed: args.seed.or(file.seed).unwrap_or(VerifyOptions::default().seed),
            output_path: args.out.or(file.out),
            format: args.format.or(file.format).unwrap_or(default_format),
            include_slow: args.include_slow || file.include_slow,
            beta: args.beta.or(file.beta).unwrap_or(1000.0),
            r_min: args.r_min.or(file.r_min),
            r_max: args.r_max.or(file.r_max),
            points: args.points.or(file.points),
            c12: args.c12.or(file.c12).unwrap_or(1.0),
            input: args.input.or(file.input),
            kernel,
            quantity: args.quantity.or(file.quantity),
            basis: args.basis.or(file.basis),
            mc_samples: args.mc_samples.or(file.mc_samples).unwrap_or(VerifyOptions::default().mc_samples),
        };
        if !(cfg.beta > 0.0) || !cfg.beta.is_finite() {
            return Err(CliError::Usage(format!("--beta must be positive, got {}", cfg.beta)));
        }
        if !cfg.c12.is_finite() {
            return Err(CliError::Usage("--c12 must be finite".into()));
        }
        if cfg.points == Some(0) || cfg.points == Some(1) {
            return Err(CliError::Usage("--points must be at least 2".into()));
        }
        Ok(cfg)
    }

    fn grid(&self, lo: f64, hi: f64, n: usize) -> CliResult<Vec<f64>> {
        let (lo, hi, n) = (self.r_min.unwrap_or(lo), self.r_max.unwrap_or(hi), self.points.unwrap_or(n));
        if !(lo > 0.0) || !(hi > lo) {
            return Err(CliError::Usage(format!("radius window must satisfy 0 < r-min < r-max, got [{lo}, {hi}]")));
        }
        Ok(log_grid(lo, hi, n))
    }
}

fn parse_kernel(s: &str) -> CliResult<KernelSpec> {
    let (text, path) = if s.trim_start().starts_with('{') {
        (s.to_string(), PathBuf::from("--kernel"))
    } else {
        let p = PathBuf::from(s);
        (fs::read_to_string(&p).map_err(io_err(&p))?, p)
    };
    let spec: KernelSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Parse { path, line: e.line() as u64, msg: e.to_string() })?;
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(spec)
}

/// Reads `(r, value)` rows. A non-numeric first row is taken as a header;
/// lines starting with `#` are skipped.
pub fn read_samples_csv(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        if rec.len() < 2 {
            return Err(CliError::Parse { path: path.into(), line, msg: format!("expected 2 fields, found {}", rec.len()) });
        }
        let r = rec[0].parse::<f64>();
        let v = rec[1].parse::<f64>();
        match (r, v) {
            (Ok(r), Ok(v)) => rows.push((r, v)),
            _ if i == 0 => continue,
            _ => {
                return Err(CliError::Parse {
                    path: path.into(),
                    line,
                    msg: format!("cannot parse '{}', '{}' as numbers", &rec[0], &rec[1]),
                })
            }
        }
    }
    if rows.len() < 8 {
        return Err(CliError::Parse { path: path.into(), line: 0, msg: format!("need at least 8 data rows, found {}", rows.len()) });
    }
    Ok(rows)
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io { path: path.into(), source },
        kind => CliError::Parse { path: path.into(), line, msg: format!("{kind:?}") },
    }
}

fn samples_from_input(cfg: &RunConfig) -> CliResult<(PathBuf, RadialSamples)> {
    let path = cfg.input.clone().ok_or_else(|| CliError::Usage("--input is required for fit and classify".into()))?;
    let mut rows = read_samples_csv(&path)?;
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let lo = cfg.r_min.unwrap_or(f64::NEG_INFINITY);
    let hi = cfg.r_max.unwrap_or(f64::INFINITY);
    rows.retain(|p| p.0 >= lo && p.0 <= hi);
    if rows.is_empty() {
        return Err(CliError::Usage("no input rows inside the requested window".into()));
    }
    Ok((path, RadialSamples::new(rows)?))
}

fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.16e}")
    }
}

fn csv_table(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_num(x)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

fn json_table(header: &[&str], rows: &[Vec<f64>]) -> CliResult<String> {
    let objs: Vec<serde_json::Map<String, serde_json::Value>> = rows
        .iter()
        .map(|row| header.iter().zip(row).map(|(h, &x)| (h.to_string(), serde_json::json!(if x.is_nan() { None } else { Some(x) }))).collect())
        .collect();
    to_json(&objs)
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn table(cfg: &RunConfig, header: &[&str], rows: &[Vec<f64>]) -> CliResult<String> {
    match cfg.format {
        Format::Csv => Ok(csv_table(header, rows)),
        Format::Json => json_table(header, rows),
    }
}

/// Runs the verification suite. Fails with exit code 1 when any check fails,
/// after emitting the report.
pub fn cmd_verify(cfg: &RunConfig, log: &mut dyn Write) -> CliResult<(String, usize)> {
    let opts = VerifyOptions { quad: cfg.tolerances, seed: cfg.seed, include_slow: cfg.include_slow, mc_samples: cfg.mc_samples };
    let report = run_suite(&opts);
    for c in &report.checks {
        let _ = writeln!(log, "{}", c.line());
    }
    let text = match cfg.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = String::from("id,name,status,measured,target,tolerance,seconds\n");
            for c in &report.checks {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Skipped => "skipped",
                };
                let _ = writeln!(
                    s,
                    "{},{},{status},{},{},{},{:.3}",
                    c.id,
                    c.name,
                    fmt_num(c.measured),
                    fmt_num(c.target),
                    fmt_num(c.tolerance),
                    c.seconds
                );
            }
            s
        }
    };
    Ok((text, report.failures))
}

pub fn cmd_fig1(cfg: &RunConfig) -> CliResult<String> {
    let (lo, hi) = (cfg.r_min.unwrap_or(FIG1_R_RANGE.0), cfg.r_max.unwrap_or(FIG1_R_RANGE.1));
    let rows = fig1_rows(lo, hi, cfg.points.unwrap_or(FIG1_POINTS), cfg.c12, &cfg.tolerances)?;
    match cfg.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_fig1_csv(&rows, &mut buf).expect("writing to memory");
            Ok(String::from_utf8(buf).expect("ascii output"))
        }
        Format::Json => {
            let header: Vec<&str> = FIG1_HEADER.split(',').collect();
            let flat: Vec<Vec<f64>> = rows
                .iter()
                .map(|row| {
                    let mut v = vec![row.r, row.psi[0], row.psi[1], row.psi[2], row.psi_inf];
                    v.extend(row.taylor.iter().map(|t| t.unwrap_or(f64::NAN)));
                    v
                })
                .collect();
            json_table(&header, &flat)
        }
    }
}

pub fn cmd_contract(cfg: &RunConfig) -> CliResult<String> {
    let quantity = cfg.quantity.unwrap_or(if cfg.kernel.is_some() { Quantity::Kernel } else { Quantity::Example2 });
    let q = &cfg.tolerances;
    let n = 40;
    match quantity {
        Quantity::Example2 => {
            let mut rows = Vec::new();
            for rho in cfg.grid(1e-3, 10.0, n)? {
                let quad = contracted_coulomb_2d_quad(rho, q)?;
                rows.push(vec![rho, contracted_coulomb_2d_closed(rho)?, quad.value, quad.error_estimate]);
            }
            table(cfg, &["rho", "closed", "quadrature", "error_estimate"], &rows)
        }
        Quantity::AppendixA => {
            let mut rows = Vec::new();
            for d in cfg.grid(1e-2, 10.0, n)? {
                let ib = appendix_i_beta(d, cfg.beta, q)?;
                rows.push(vec![d, ib.value, ib.error_estimate, appendix_i_beta_limit(d)?]);
            }
            table(cfg, &["d", "i_beta", "error_estimate", "limit"], &rows)
        }
        Quantity::Psi0 => {
            let mut rows = Vec::new();
            for r in cfg.grid(FIG1_R_RANGE.0, FIG1_R_RANGE.1, n)? {
                let p = Psi0Params::new(r, cfg.beta, cfg.c12)?;
                let v = psi0_closed(&p, q)?;
                rows.push(vec![r, v.value, v.error_estimate, psi0_limit_beta_inf(r, cfg.c12), psi0_limit_r0(cfg.beta, cfg.c12)]);
            }
            table(cfg, &["r", "psi0", "error_estimate", "limit_beta_inf", "limit_r0"], &rows)
        }
        Quantity::I1 => {
            let mut rows = Vec::new();
            for a in cfg.grid(1e-3, 1.0, n)? {
                let k = -i1_log_coefficient(cfg.c12);
                let quad = k * (monopole_inner(a, q)?.value + monopole_outer(a, q)?.value);
                rows.push(vec![a, i1_asymptotic(a, cfg.c12)?, quad, i1_log_coefficient(cfg.c12) * a.ln()]);
            }
            table(cfg, &["a", "i1", "i1_quadrature", "log_term"], &rows)
        }
        Quantity::I2 => {
            let mut rows = Vec::new();
            for t in cfg.grid(1e-3, 3.0, n)? {
                rows.push(vec![t, i2_smooth(Vec3::new(t, 0.0, 0.0), Vec3::new(0.5 * t, 0.0, 0.0))]);
            }
            table(cfg, &["t", "i2"], &rows)
        }
        Quantity::Kernel => {
            let spec = cfg.kernel.as_ref().ok_or_else(|| CliError::Usage("--quantity kernel needs --kernel".into()))?;
            let mut rows = Vec::new();
            for r in cfg.grid(1e-2, 3.0, n)? {
                let x = Vec3::new(r, 0.0, 0.0);
                let point = match spec {
                    KernelSpec::Coulomb | KernelSpec::Yukawa { .. } => KernelPoint::Pair(Vec3::ZERO, x),
                    KernelSpec::K12Leading { .. } => {
                        KernelPoint::TwoParticle { x1: Vec3::ZERO, x2: Vec3::ZERO, y1: x, y2: Vec3::ZERO }
                    }
                    KernelSpec::GaussianBump { dim, .. } => {
                        let mut v = vec![0.0; *dim];
                        v[0] = r;
                        KernelPoint::Point(v)
                    }
                    KernelSpec::TestGaussian => KernelPoint::Point(vec![r, 0.0, 0.0]),
                };
                rows.push(vec![r, eval_kernel(spec, &point)?]);
            }
            table(cfg, &["r", "kernel"], &rows)
        }
    }
}

#[derive(Serialize)]
struct FitOutput<'a> {
    #[serde(flatten)]
    report: &'a FitReport,
    basis: String,
    window: (f64, f64),
    samples: usize,
    input: String,
}

pub fn cmd_fit(cfg: &RunConfig) -> CliResult<String> {
    let (path, samples) = samples_from_input(cfg)?;
    let basis = ExpansionBasis::parse(cfg.basis.as_deref().unwrap_or("ln,1,r,r^2"))?;
    let report = fit_expansion(&samples, &basis)?;
    match cfg.format {
        Format::Json => to_json(&FitOutput {
            report: &report,
            basis: basis.to_string(),
            window: samples.window,
            samples: samples.len(),
            input: path.display().to_string(),
        }),
        Format::Csv => {
            let mut s = format!("# window {:.16e} {:.16e}, basis {basis}\nterm,coefficient,standard_error\n", samples.window.0, samples.window.1);
            for (i, t) in basis.terms.iter().enumerate() {
                let _ = writeln!(s, "{t},{},{}", fmt_num(report.coefficients[i]), fmt_num(report.standard_errors[i]));
            }
            let _ = writeln!(s, "# residual_rms {}, condition_number {}", fmt_num(report.residual_rms), fmt_num(report.condition_number));
            Ok(s)
        }
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    #[serde(flatten)]
    class: SmoothnessClass,
    window: (f64, f64),
    samples: usize,
    input: String,
}

pub fn cmd_classify(cfg: &RunConfig) -> CliResult<String> {
    let (path, samples) = samples_from_input(cfg)?;
    let class = classify_smoothness(&samples, None)?;
    match cfg.format {
        Format::Json => to_json(&ClassifyOutput { class, window: samples.window, samples: samples.len(), input: path.display().to_string() }),
        Format::Csv => Ok(format!(
            "# window {:.16e} {:.16e}\np,leading_exponent,has_log\n{},{},{}\n",
            samples.window.0, samples.window.1, class.p, class.leading_exponent, class.has_log
        )),
    }
}

#[derive(Serialize)]
struct TableRow {
    order: u32,
    variant: String,
    p: f64,
    classified_p: f64,
    has_log: bool,
}

pub fn cmd_table(cfg: &RunConfig) -> CliResult<String> {
    let rows: Vec<TableRow> = feynman_table_validated()?
        .into_iter()
        .map(|(e, c)| TableRow { order: e.order, variant: e.variant.to_string(), p: e.p, classified_p: c.p, has_log: c.has_log })
        .collect();
    match cfg.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from("order,variant,p,classified_p,has_log\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{}", r.order, r.variant, r.p, r.classified_p, r.has_log);
            }
            Ok(s)
        }
    }
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match &cfg.output_path {
        Some(p) => fs::write(p, text).map_err(io_err(p)),
        None => stdout.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>"))),
    }
}

/// Executes a resolved configuration.
pub fn execute(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let text = match cfg.command {
        Command::Verify => {
            let (text, failures) = cmd_verify(cfg, stderr)?;
            emit(cfg, &text, stdout)?;
            return if failures == 0 { Ok(()) } else { Err(CliError::ChecksFailed(failures)) };
        }
        Command::Fig1 => cmd_fig1(cfg)?,
        Command::Contract => cmd_contract(cfg)?,
        Command::Fit => cmd_fit(cfg)?,
        Command::Classify => cmd_classify(cfg)?,
        Command::Table => cmd_table(cfg)?,
    };
    emit(cfg, &text, stdout)
}

/// Parses `argv`, runs, and returns the process exit code.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::resolve(args).and_then(|cfg| execute(&cfg, stdout, stderr));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "ckernels: {e}");
            e.exit_code()
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("ckernels").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&[]).0, 2);
        assert_eq!(run_args(&["--command", "nope"]).0, 2);
        assert_eq!(run_args(&["--command", "fit"]).0, 2);
        assert_eq!(run_args(&["--command", "fig1", "--tol-rel", "0"]).0, 2);
        assert_eq!(run_args(&["--command", "contract", "--kernel", "{\"variant\":\"Yukawa\"}"]).0, 2);
    }

    #[test]
    fn table_json() {
        let (code, out, _) = run_args(&["--command", "table"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 3);
        assert_eq!(v[1]["variant"], "exchange");
        assert_eq!(v[1]["classified_p"], -6.0);
    }

    #[test]
    fn contract_kernel_csv() {
        let (code, out, _) =
            run_args(&["--command", "contract", "--kernel", r#"{"variant":"Coulomb"}"#, "--r-min", "0.5", "--r-max", "2", "--points", "4"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "r,kernel");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], "5.0000000000000000e-1,2.0000000000000000e0");
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, "command = \"contract\"\nquantity = \"i2\"\npoints = 3\nbeta = 50.0\n").unwrap();
        let args = Args::try_parse_from(["ckernels", "--config", path.to_str().unwrap(), "--points", "5"]).unwrap();
        let cfg = RunConfig::resolve(args).unwrap();
        assert_eq!(cfg.command, Command::Contract);
        assert_eq!(cfg.points, Some(5));
        assert_eq!(cfg.beta, 50.0);
        assert_eq!(cfg.format, Format::Csv);
        fs::write(&path, "command = \"fit\"\n\nbogus = 1\n").unwrap();
        let args = Args::try_parse_from(["ckernels", "--config", path.to_str().unwrap()]).unwrap();
        match RunConfig::resolve(args) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_parse_errors_carry_line_numbers() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let mut text = String::from("r,value\n");
        for i in 1..=9 {
            text.push_str(&format!("{},{}\n", i as f64 * 0.1, i));
        }
        text.push_str("0.95,abc\n");
        fs::write(&path, &text).unwrap();
        match read_samples_csv(&path) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 11),
            other => panic!("{other:?}"),
        }
        let missing = dir.path().join("missing.csv");
        let err = read_samples_csv(&missing).unwrap_err();
        assert!(matches!(err, CliError::Io { .. }));
        assert!(err.to_string().contains("missing.csv"));
    }
}
