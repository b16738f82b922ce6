//! Command-line front end for `siegel-core`.
//!
//! [`run`] parses arguments, dispatches a subcommand and returns the process
//! exit code, writing results to `out` and diagnostics to `err`.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use siegel_core::mordell::{phi_quadrature, phi_rational, transform_rhs};
use siegel_core::numeric::rel_diff;
use siegel_core::pcf::pcf_u_report;
use siegel_core::riemann_siegel::zeta;
use siegel_core::verify::{check_names, run_checks, CheckRow, VerifyOptions, DEFAULT_SEED};
use siegel_core::{
    c64, Complex64, Error, Method, MordellArgs, PcfArgs, QuadratureConfig, QuadratureResult, RationalTau,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_NO_CONVERGENCE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

pub const DEFAULT_BENCH_TAUS: [f64; 5] = [1.0, 0.3, 0.1, 0.03, 0.01];
pub const BENCH_CSV_HEADER: &str =
    "tau_re,tau_im,nodes_direct,nodes_transformed,time_direct_ns,time_transformed_ns,agree_rel";
const BENCH_REPEATS: usize = 5;

/// Parses `a+bi` literals: `2`, `3i`, `-i`, `1.5-0.2i`, `1e-3+2i`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex number '{text}' (expected a+bi, e.g. 2, 3i, 1.5-0.2i)");
    let number = |p: &str| -> Result<f64, String> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ if p.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') => Err(bad()),
            _ => p.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad),
        }
    };
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        if t.ends_with(['e', 'E']) {
            return Err(bad());
        }
        return number(&t).and_then(|v| if t == "+" || t == "-" { Err(bad()) } else { Ok(c64(v, 0.0)) });
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = &body[..k];
            if re.is_empty() || re == "+" || re == "-" {
                return Err(bad());
            }
            Ok(c64(number(re)?, number(&body[k..])?))
        }
        None => Ok(c64(0.0, number(body)?)),
    }
}

fn parse_tol(text: &str) -> Result<f64, String> {
    let v: f64 = text.parse().map_err(|_| format!("invalid tolerance '{text}'"))?;
    if (1e-13..=1e-3).contains(&v) {
        Ok(v)
    } else {
        Err(format!("tolerance {v:e} outside [1e-13, 1e-3]"))
    }
}

fn parse_method(text: &str) -> Result<Method, String> {
    Method::from_str(text).map_err(|e| e.to_string())
}

/// Comma-separated complex literals.
#[derive(Debug, Clone, PartialEq)]
pub struct TauList(pub Vec<Complex64>);

fn parse_tau_list(text: &str) -> Result<TauList, String> {
    text.split(',').map(parse_complex).collect::<Result<_, _>>().map(TauList)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Contour quadrature of the defining integral.
    Direct,
    /// Quadrature of the transformed integral.
    Transform,
    /// Closed form; `tau` must be a rational m/n with m, n ≤ 64.
    Closed,
}

impl Route {
    fn as_str(self) -> &'static str {
        match self {
            Route::Direct => "direct",
            Route::Transform => "transform",
            Route::Closed => "closed",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "siegel", version, about = "Riemann-Siegel integrals, Mordell integrals and parabolic cylinder functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Relative quadrature tolerance, in [1e-13, 1e-3].
    #[arg(long, value_parser = parse_tol)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Common {
    fn cfg(&self) -> QuadratureConfig {
        match self.tol {
            Some(t) => QuadratureConfig::default().with_rel_tol(t),
            None => QuadratureConfig::default(),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate ζ(s).
    Zeta {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        s: Complex64,
        /// classical, pcf or oracle.
        #[arg(long, value_parser = parse_method, default_value = "classical")]
        method: Method,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the parabolic cylinder function U(a, z).
    Pcf {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        a: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the Mordell integral Φ(x, τ).
    Mordell {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        x: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        tau: Complex64,
        #[arg(long, value_enum, default_value = "direct")]
        route: Route,
        #[command(flatten)]
        common: Common,
    },
    /// Run the identity checks.
    Verify {
        /// Comma-separated check names or dotted prefixes, e.g. `mordell`.
        #[arg(long)]
        only: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Replaces every check's own tolerance, in [1e-13, 1e-3].
        #[arg(long, value_parser = parse_tol)]
        tol: Option<f64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// List the check names and exit.
        #[arg(long)]
        list: bool,
    },
    /// Compare direct and transformed quadrature of Φ(x, τ) over a τ grid.
    Bench {
        /// Comma-separated τ values.
        #[arg(long, value_parser = parse_tau_list, allow_hyphen_values = true)]
        taus: Option<TauList>,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
        x: Complex64,
        #[command(flatten)]
        common: Common,
    },
}

/// A single evaluation; the JSON keys are stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub re: f64,
    pub im: f64,
    pub abs_err: f64,
    pub nodes: usize,
    pub method: String,
    pub converged: bool,
}

impl Report {
    fn new(value: Complex64, abs_err: f64, nodes: usize, method: &str) -> Self {
        Self {
            re: value.re,
            im: value.im,
            abs_err,
            nodes,
            method: method.to_string(),
            converged: true,
        }
    }

    fn from_quadrature(q: &QuadratureResult, method: &str) -> Self {
        Self {
            converged: q.converged,
            ..Self::new(q.value, q.abs_error_estimate, q.nodes_used, method)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub tau_re: f64,
    pub tau_im: f64,
    pub nodes_direct: usize,
    pub nodes_transformed: usize,
    pub time_direct_ns: u128,
    pub time_transformed_ns: u128,
    pub agree_rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl From<&CheckRow> for VerifyRow {
    fn from(r: &CheckRow) -> Self {
        Self {
            name: r.name.to_string(),
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            passed: r.passed,
            error: r.error.clone(),
        }
    }
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::NonFinite(_) => EXIT_NO_CONVERGENCE,
        Error::Pole { .. }
        | Error::Domain(_)
        | Error::OrderOutOfRange { .. }
        | Error::DegenerateRationalPoint { .. }
        | Error::SingularAtOrigin { .. } => EXIT_DOMAIN,
        Error::InvalidConfig(_) => EXIT_USAGE,
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_USAGE,
            message: format!("write failed: {e}"),
        }
    }
}

fn usage(message: impl fmt::Display) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.to_string(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Zeta { s, method, common } => {
            let r = zeta(s, &common.cfg(), method)?;
            let report = Report::new(r.value, r.abs_error_estimate, r.nodes_used, method.as_str());
            write_report(out, &report, common.format, &format!("zeta({})", show(s)))?;
            Ok(EXIT_OK)
        }
        Command::Pcf { a, z, common } => {
            let q = pcf_u_report(PcfArgs::new(a, z), &common.cfg())?;
            let report = Report::from_quadrature(&q, "integral");
            write_report(out, &report, common.format, &format!("U({}, {})", show(a), show(z)))?;
            Ok(EXIT_OK)
        }
        Command::Mordell { x, tau, route, common } => {
            let report = mordell(x, tau, route, &common.cfg())?;
            write_report(out, &report, common.format, &format!("Phi({}, {})", show(x), show(tau)))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            only,
            seed,
            tol,
            format,
            list,
        } => {
            if list {
                for name in check_names() {
                    writeln!(out, "{name}")?;
                }
                return Ok(EXIT_OK);
            }
            verify(out, only, seed, tol, format.unwrap_or(Format::Text))
        }
        Command::Bench { taus, x, common } => {
            let taus = taus.map_or_else(|| DEFAULT_BENCH_TAUS.iter().map(|&t| c64(t, 0.0)).collect(), |t| t.0);
            bench(out, x, &taus, &common.cfg(), common.format.unwrap_or(Format::Csv))
        }
    }
}

/// Finds m/n with m, n ≤ 64 equal to a real `tau`.
fn as_rational(tau: Complex64) -> Option<RationalTau> {
    if tau.im != 0.0 || tau.re.is_nan() || tau.re <= 0.0 {
        return None;
    }
    (1..=64u32).find_map(|n| {
        let m = (tau.re * n as f64).round();
        let exact = (1.0..=64.0).contains(&m) && (m / n as f64 - tau.re).abs() <= 1e-12 * tau.re;
        exact.then(|| RationalTau::new(m as u32, n).ok()).flatten()
    })
}

fn mordell(x: Complex64, tau: Complex64, route: Route, cfg: &QuadratureConfig) -> Result<Report, Failure> {
    cfg.validate()?;
    let args = MordellArgs::new(x, tau)?;
    Ok(match route {
        Route::Direct => Report::from_quadrature(&phi_quadrature(args, cfg)?, route.as_str()),
        Route::Transform => Report::from_quadrature(&transform_rhs(args, cfg)?, route.as_str()),
        Route::Closed => {
            let rt = as_rational(tau).ok_or_else(|| {
                Failure::from(Error::Domain(format!("tau = {} is not m/n with m, n <= 64", show(tau))))
            })?;
            Report::new(phi_rational(x, rt)?, 0.0, 0, route.as_str())
        }
    })
}

fn show_real(v: f64) -> String {
    if v == 0.0 || (1e-4..1e9).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn show(z: Complex64) -> String {
    let im = show_real(z.im);
    match (z.re == 0.0, z.im == 0.0) {
        (_, true) => show_real(z.re),
        (true, false) => format!("{im}i"),
        (false, false) if z.im < 0.0 => format!("{}{im}i", show_real(z.re)),
        (false, false) => format!("{}+{im}i", show_real(z.re)),
    }
}

fn write_report(out: &mut dyn Write, r: &Report, format: Option<Format>, label: &str) -> Result<(), Failure> {
    match format.unwrap_or(Format::Text) {
        Format::Json => writeln!(out, "{}", serde_json::to_string(r).expect("report serializes"))?,
        Format::Csv => {
            writeln!(out, "re,im,abs_err,nodes,method,converged")?;
            writeln!(out, "{:e},{:e},{:e},{},{},{}", r.re, r.im, r.abs_err, r.nodes, r.method, r.converged)?;
        }
        Format::Text => {
            writeln!(out, "{label} = {}", show(c64(r.re, r.im)))?;
            writeln!(out, "  method {}, nodes {}, abs_err {:.2e}", r.method, r.nodes, r.abs_err)?;
        }
    }
    Ok(())
}

fn verify(out: &mut dyn Write, only: Option<String>, seed: u64, tol: Option<f64>, format: Format) -> Result<i32, Failure> {
    let opts = VerifyOptions {
        seed,
        tolerance_override: tol,
        only,
        ..VerifyOptions::default()
    };
    let rows: Vec<VerifyRow> = run_checks(&opts).iter().map(VerifyRow::from).collect();
    if rows.is_empty() {
        return Err(usage(format!(
            "no check matches '{}'; see `siegel verify --list`",
            opts.only.unwrap_or_default()
        )));
    }
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("rows serialize"))?,
        Format::Csv => {
            writeln!(out, "name,max_residual,tolerance,passed")?;
            for r in &rows {
                writeln!(out, "{},{:e},{:e},{}", r.name, r.max_residual, r.tolerance, r.passed)?;
            }
        }
        Format::Text => {
            let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
            for r in &rows {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                write!(out, "{:width$}  {:>10.3e}  {:>8.1e}  {verdict}", r.name, r.max_residual, r.tolerance)?;
                match &r.error {
                    Some(e) => writeln!(out, "  ({e})")?,
                    None => writeln!(out)?,
                }
            }
            let passed = rows.iter().filter(|r| r.passed).count();
            writeln!(out, "{passed}/{} checks passed", rows.len())?;
        }
    }
    Ok(if rows.iter().all(|r| r.passed) {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

/// Median wall time of [`BENCH_REPEATS`] runs, plus the last result.
fn timed<T>(mut f: impl FnMut() -> siegel_core::Result<T>) -> siegel_core::Result<(T, Duration)> {
    let mut times = Vec::with_capacity(BENCH_REPEATS);
    let mut last = None;
    for _ in 0..BENCH_REPEATS {
        let start = Instant::now();
        let v = f()?;
        times.push(start.elapsed());
        last = Some(v);
    }
    times.sort();
    Ok((last.expect("at least one run"), times[BENCH_REPEATS / 2]))
}

pub fn bench_row(x: Complex64, tau: Complex64, cfg: &QuadratureConfig) -> siegel_core::Result<BenchRow> {
    let args = MordellArgs::new(x, tau)?;
    let (direct, t_direct) = timed(|| phi_quadrature(args, cfg))?;
    let (fast, t_fast) = timed(|| transform_rhs(args, cfg))?;
    Ok(BenchRow {
        tau_re: tau.re,
        tau_im: tau.im,
        nodes_direct: direct.nodes_used,
        nodes_transformed: fast.nodes_used,
        time_direct_ns: t_direct.as_nanos(),
        time_transformed_ns: t_fast.as_nanos(),
        agree_rel: rel_diff(fast.value, direct.value),
    })
}

fn bench(out: &mut dyn Write, x: Complex64, taus: &[Complex64], cfg: &QuadratureConfig, format: Format) -> Result<i32, Failure> {
    cfg.validate()?;
    let rows = taus
        .iter()
        .map(|&tau| bench_row(x, tau, cfg))
        .collect::<siegel_core::Result<Vec<_>>>()?;
    match format {
        Format::Csv => {
            writeln!(out, "{BENCH_CSV_HEADER}")?;
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{:e}",
                    r.tau_re, r.tau_im, r.nodes_direct, r.nodes_transformed, r.time_direct_ns, r.time_transformed_ns, r.agree_rel
                )?;
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows).expect("rows serialize"))?,
        Format::Text => {
            writeln!(out, "{:>16}  {:>8}  {:>8}  {:>7}  {:>12}  {:>12}  {:>9}", "tau", "direct", "transf", "ratio", "t_direct", "t_transf", "agree")?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>16}  {:>8}  {:>8}  {:>7.1}  {:>12?}  {:>12?}  {:>9.1e}",
                    show(c64(r.tau_re, r.tau_im)),
                    r.nodes_direct,
                    r.nodes_transformed,
                    r.nodes_direct as f64 / r.nodes_transformed as f64,
                    Duration::from_nanos(r.time_direct_ns as u64),
                    Duration::from_nanos(r.time_transformed_ns as u64),
                    r.agree_rel
                )?;
            }
        }
    }
    Ok(EXIT_OK)
}
