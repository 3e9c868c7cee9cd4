//! Command-line front end: argument parsing into a validated [`RunConfig`]
//! and execution writing CSV or JSON to a data sink, diagnostics to another.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::checks::{run_all, CriterionOutcome, Level};
use crate::error::Error;
use crate::fourier::{
    find_real_zeros_of, phi0_ft, phi_ft, scaled_ft_of, ComplexEval, Kernel, StripPoint, ZeroBracket,
};
use crate::phi::{phi, phi0, phi1};
use crate::sfunc::{s_eval_with, s_rational, EvalResult, Rational, Route};
use crate::special::Constants;
use crate::theorem_lab::{theorem_demo_with, TheoremReport, DEFAULT_THETA_NODES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const TOL_MIN: f64 = 1e-13;
pub const TOL_MAX: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Phi,
    Phi0,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Phi => Kernel::Phi,
            KernelArg::Phi0 => Kernel::Phi0,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "zetaphi",
    version,
    about = "S function, phi transform and zeta-zero diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Clone, Args)]
struct Common {
    /// Absolute tolerance, within [1e-13, 1e-3].
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate S(a); a may be a decimal or a fraction n/m.
    SEval {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        route: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate S over a grid of a.
    STable {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        min: f64,
        #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
        max: f64,
        #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
        step: f64,
        #[arg(long)]
        route: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate φ, φ0 and φ1 over a grid of t.
    PhiTable {
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        min: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        max: f64,
        #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
        step: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the transform at one complex wavenumber.
    FtEval {
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
        #[arg(long, value_enum, default_value_t = KernelArg::Phi)]
        kernel: KernelArg,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate the scaled transform on the real axis.
    FtScan {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        min: f64,
        #[arg(long, default_value_t = 60.0, allow_hyphen_values = true)]
        max: f64,
        #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
        step: f64,
        #[arg(long, value_enum, default_value_t = KernelArg::Phi)]
        kernel: KernelArg,
        #[command(flatten)]
        common: Common,
    },
    /// Locate sign changes of the scaled transform.
    Zeros {
        #[arg(long, allow_hyphen_values = true)]
        kmin: f64,
        #[arg(long, allow_hyphen_values = true)]
        kmax: f64,
        #[arg(long, default_value_t = 0.1, allow_hyphen_values = true)]
        step: f64,
        #[arg(long, value_enum, default_value_t = KernelArg::Phi)]
        kernel: KernelArg,
        #[command(flatten)]
        common: Common,
    },
    /// Circle-integral and zero-map check at z = x + iy.
    TheoremCheck {
        #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [1e-2, 3e-3, 1e-3])]
        eps: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_THETA_NODES)]
        n_theta: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance checks on reduced grids.
    Selftest {
        /// Use the full grids instead.
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        common: Common,
    },
}

/// Argument for `s-eval`: a decimal or an exact fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AValue {
    Decimal(f64),
    Fraction(Rational),
}

impl AValue {
    pub fn to_f64(self) -> f64 {
        match self {
            AValue::Decimal(a) => a,
            AValue::Fraction(q) => q.to_f64(),
        }
    }
}

/// A grid min, min + step, …, max (the last point clamped to max).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step * (1.0 + 1e-12)).floor() as usize;
        (0..=n)
            .map(|i| (self.min + i as f64 * self.step).min(self.max))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    SEval {
        a: AValue,
        route: Option<Route>,
    },
    STable {
        range: Range,
        route: Option<Route>,
    },
    PhiTable {
        range: Range,
    },
    FtEval {
        k: StripPoint,
        kernel: Kernel,
    },
    FtScan {
        range: Range,
        kernel: Kernel,
    },
    Zeros {
        range: Range,
        kernel: Kernel,
    },
    TheoremCheck {
        x: f64,
        y: f64,
        eps_list: Vec<f64>,
        n_theta: usize,
    },
    Selftest {
        level: Level,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub tol: f64,
    pub format: Format,
}

/// A parse failure: help or version text (exit 0) or a usage error (exit 2).
#[derive(Debug, Clone, PartialEq)]
pub enum ParseOutcome {
    Info(String),
    Usage(String),
}

fn usage(flag: &str, msg: impl std::fmt::Display) -> ParseOutcome {
    ParseOutcome::Usage(format!("invalid value for --{flag}: {msg}"))
}

fn check_range(min: f64, max: f64, step: f64, names: [&str; 3]) -> Result<Range, ParseOutcome> {
    for (v, n) in [(min, names[0]), (max, names[1]), (step, names[2])] {
        if !v.is_finite() {
            return Err(usage(n, "must be finite"));
        }
    }
    if min >= max {
        return Err(usage(
            names[0],
            format!("{min} must be below --{} = {max}", names[1]),
        ));
    }
    if step <= 0.0 {
        return Err(usage(names[2], "must be positive"));
    }
    Ok(Range { min, max, step })
}

fn parse_route(r: Option<String>) -> Result<Option<Route>, ParseOutcome> {
    r.map(|s| s.parse::<Route>().map_err(|e| usage("route", e)))
        .transpose()
}

fn check_common(c: &Common) -> Result<(), ParseOutcome> {
    if !(TOL_MIN..=TOL_MAX).contains(&c.tol) {
        return Err(usage(
            "tol",
            format!("{:e} outside [{TOL_MIN:e}, {TOL_MAX:e}]", c.tol),
        ));
    }
    Ok(())
}

/// Parses `argv` (without the program name) into a validated configuration.
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, ParseOutcome>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let args = std::iter::once(std::ffi::OsString::from("zetaphi"))
        .chain(argv.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(args).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
            ParseOutcome::Info(e.to_string())
        }
        _ => ParseOutcome::Usage(e.to_string()),
    })?;
    let (command, common) = match cli.command {
        Cmd::SEval { a, route, common } => {
            let a = if a.contains('/') {
                AValue::Fraction(a.parse::<Rational>().map_err(|e| usage("a", e))?)
            } else {
                let v: f64 = a
                    .trim()
                    .parse()
                    .map_err(|_| usage("a", format!("'{a}' is not a number")))?;
                if !(v.is_finite() && v >= 0.0) {
                    return Err(usage("a", format!("{v} must be finite and >= 0")));
                }
                AValue::Decimal(v)
            };
            (
                Command::SEval {
                    a,
                    route: parse_route(route)?,
                },
                common,
            )
        }
        Cmd::STable {
            min,
            max,
            step,
            route,
            common,
        } => {
            let range = check_range(min, max, step, ["min", "max", "step"])?;
            if min < 0.0 {
                return Err(usage("min", "a must be >= 0"));
            }
            (
                Command::STable {
                    range,
                    route: parse_route(route)?,
                },
                common,
            )
        }
        Cmd::PhiTable {
            min,
            max,
            step,
            common,
        } => (
            Command::PhiTable {
                range: check_range(min, max, step, ["min", "max", "step"])?,
            },
            common,
        ),
        Cmd::FtEval {
            re,
            im,
            kernel,
            common,
        } => {
            let k = StripPoint::new(re, im).map_err(|e| usage("im", e))?;
            (
                Command::FtEval {
                    k,
                    kernel: kernel.into(),
                },
                common,
            )
        }
        Cmd::FtScan {
            min,
            max,
            step,
            kernel,
            common,
        } => (
            Command::FtScan {
                range: check_range(min, max, step, ["min", "max", "step"])?,
                kernel: kernel.into(),
            },
            common,
        ),
        Cmd::Zeros {
            kmin,
            kmax,
            step,
            kernel,
            common,
        } => (
            Command::Zeros {
                range: check_range(kmin, kmax, step, ["kmin", "kmax", "step"])?,
                kernel: kernel.into(),
            },
            common,
        ),
        Cmd::TheoremCheck {
            x,
            y,
            eps,
            n_theta,
            common,
        } => {
            if !(x > 0.0 && x < 1.0) {
                return Err(usage("x", format!("{x} must lie in (0, 1)")));
            }
            if !y.is_finite() {
                return Err(usage("y", "must be finite"));
            }
            if eps.is_empty() || eps.iter().any(|e| !(1e-5..=1e-1).contains(e)) {
                return Err(usage("eps", "each value must lie in [1e-5, 1e-1]"));
            }
            if eps.windows(2).any(|w| w[1] >= w[0]) {
                return Err(usage("eps", "values must be strictly decreasing"));
            }
            if n_theta < 64 {
                return Err(usage("n-theta", "must be at least 64"));
            }
            (
                Command::TheoremCheck {
                    x,
                    y,
                    eps_list: eps,
                    n_theta,
                },
                common,
            )
        }
        Cmd::Selftest { full, common } => (
            Command::Selftest {
                level: if full { Level::Full } else { Level::Reduced },
            },
            common,
        ),
    };
    check_common(&common)?;
    Ok(RunConfig {
        command,
        tol: common.tol,
        format: common.format,
    })
}

/// Formats a number with 12 significant digits, trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, e) = s.split_once('e').unwrap_or((&s, "0"));
        let mantissa = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{mantissa}e{e}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: serde_json::Value,
}

#[derive(Serialize)]
struct SRow {
    a: f64,
    #[serde(flatten)]
    eval: EvalResult,
}

#[derive(Serialize)]
struct PhiRow {
    t: f64,
    phi: f64,
    phi0: f64,
    phi1: f64,
}

#[derive(Serialize)]
struct FtRow {
    re_k: f64,
    im_k: f64,
    #[serde(flatten)]
    eval: ComplexEval,
}

#[derive(Serialize)]
struct ScanRow {
    k: f64,
    scaled: f64,
    abs_err: f64,
}

fn to_json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).unwrap_or(serde_json::Value::Null)
}

fn s_at(a: AValue, tol: f64, route: Option<Route>) -> crate::Result<EvalResult> {
    match (a, route) {
        (AValue::Fraction(q), Some(Route::Rational)) => s_rational(q),
        _ => s_eval_with(a.to_f64(), tol, route),
    }
}

fn s_row(a: f64, r: &EvalResult) -> Vec<String> {
    vec![
        fmt_num(a),
        fmt_num(r.value),
        fmt_num(r.abs_err),
        r.route.to_string(),
    ]
}

fn complex_pair(z: Complex64) -> [String; 2] {
    [fmt_num(z.re), fmt_num(z.im)]
}

fn theorem_table(r: &TheoremReport) -> Table {
    let rows = r
        .eps_list
        .iter()
        .zip(&r.abs_i)
        .zip(&r.i_abs_err)
        .map(|((e, i), err)| {
            vec![
                fmt_num(r.z.re),
                fmt_num(r.z.im),
                fmt_num(*e),
                fmt_num(*i),
                fmt_num(*err),
                fmt_num(r.transform_scaled_residual),
                r.passed.to_string(),
            ]
        })
        .collect();
    Table {
        header: vec![
            "x",
            "y",
            "eps",
            "abs_i",
            "abs_err",
            "transform_scaled_residual",
            "passed",
        ],
        rows,
        json: to_json(r),
    }
}

fn selftest_table(outcomes: &[CriterionOutcome]) -> Table {
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.id.to_string(),
                o.name.to_string(),
                if o.passed { "PASS" } else { "FAIL" }.to_string(),
                fmt_num(o.measured),
                fmt_num(o.threshold),
                o.detail.clone(),
            ]
        })
        .collect();
    let all = outcomes.iter().all(|o| o.passed);
    Table {
        header: vec![
            "id",
            "criterion",
            "status",
            "measured",
            "threshold",
            "detail",
        ],
        rows,
        json: json!({ "criteria": to_json(&outcomes), "passed": all }),
    }
}

fn execute(cfg: &RunConfig, constants: &Constants) -> crate::Result<(Table, i32)> {
    let tol = cfg.tol;
    let table = match &cfg.command {
        Command::SEval { a, route } => {
            let r = s_at(*a, tol, *route)?;
            let av = a.to_f64();
            let mut row = s_row(av, &r);
            row.push(r.work.to_string());
            Table {
                header: vec!["a", "value", "abs_err", "route", "work"],
                rows: vec![row],
                json: to_json(&SRow { a: av, eval: r }),
            }
        }
        Command::STable { range, route } => {
            let pts = range.points();
            let evals: Vec<EvalResult> = pts
                .iter()
                .map(|&a| s_eval_with(a, tol, *route))
                .collect::<crate::Result<_>>()?;
            let rows = pts.iter().zip(&evals).map(|(a, r)| s_row(*a, r)).collect();
            let json_rows: Vec<SRow> = pts
                .iter()
                .zip(&evals)
                .map(|(&a, &eval)| SRow { a, eval })
                .collect();
            Table {
                header: vec!["a", "value", "abs_err", "route"],
                rows,
                json: json!({ "rows": to_json(&json_rows) }),
            }
        }
        Command::PhiTable { range } => {
            let mut data = Vec::new();
            for t in range.points() {
                data.push(PhiRow {
                    t,
                    phi: phi(t, tol)?,
                    phi0: phi0(t),
                    phi1: phi1(t),
                });
            }
            let rows = data
                .iter()
                .map(|r| {
                    vec![
                        fmt_num(r.t),
                        fmt_num(r.phi),
                        fmt_num(r.phi0),
                        fmt_num(r.phi1),
                    ]
                })
                .collect();
            Table {
                header: vec!["t", "phi", "phi0", "phi1"],
                rows,
                json: json!({ "rows": to_json(&data) }),
            }
        }
        Command::FtEval { k, kernel } => {
            let r = match kernel {
                Kernel::Phi => phi_ft(*k, tol)?,
                Kernel::Phi0 => phi0_ft(*k, tol)?,
            };
            let [re, im] = complex_pair(r.value);
            Table {
                header: vec!["re_k", "im_k", "re", "im", "abs_err"],
                rows: vec![vec![
                    fmt_num(k.re()),
                    fmt_num(k.im()),
                    re,
                    im,
                    fmt_num(r.abs_err),
                ]],
                json: to_json(&FtRow {
                    re_k: k.re(),
                    im_k: k.im(),
                    eval: r,
                }),
            }
        }
        Command::FtScan { range, kernel } => {
            use rayon::prelude::*;
            let data: Vec<ScanRow> = range
                .points()
                .par_iter()
                .map(|&k| {
                    scaled_ft_of(*kernel, k, tol).map(|s| ScanRow {
                        k,
                        scaled: s.value,
                        abs_err: s.abs_err,
                    })
                })
                .collect::<crate::Result<_>>()?;
            let rows = data
                .iter()
                .map(|r| vec![fmt_num(r.k), fmt_num(r.scaled), fmt_num(r.abs_err)])
                .collect();
            Table {
                header: vec!["k", "scaled", "abs_err"],
                rows,
                json: json!({ "rows": to_json(&data) }),
            }
        }
        Command::Zeros { range, kernel } => {
            let found: Vec<ZeroBracket> = find_real_zeros_of(
                *kernel,
                range.min,
                range.max,
                range.step,
                1e-6,
                tol.max(1e-12),
            )?;
            let rows = found
                .iter()
                .map(|b| {
                    vec![
                        fmt_num(b.root),
                        fmt_num(b.k_lo),
                        fmt_num(b.k_hi),
                        fmt_num(b.residual),
                    ]
                })
                .collect();
            Table {
                header: vec!["root", "k_lo", "k_hi", "residual"],
                rows,
                json: json!({ "zeros": to_json(&found) }),
            }
        }
        Command::TheoremCheck {
            x,
            y,
            eps_list,
            n_theta,
        } => {
            let r = theorem_demo_with(*x, *y, eps_list, tol, *n_theta)?;
            let code = if r.passed { EXIT_OK } else { EXIT_NUMERIC };
            return Ok((theorem_table(&r), code));
        }
        Command::Selftest { level } => {
            let outcomes = run_all(*level, constants);
            let code = if outcomes.iter().all(|o| o.passed) {
                EXIT_OK
            } else {
                EXIT_NUMERIC
            };
            return Ok((selftest_table(&outcomes), code));
        }
    };
    Ok((table, EXIT_OK))
}

fn emit(table: &Table, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "{}", table.header.join(","))?;
            for row in &table.rows {
                let fields: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
                writeln!(out, "{}", fields.join(","))?;
            }
        }
        Format::Json => {
            writeln!(
                out,
                "{}",
                serde_json::to_string(&table.json).unwrap_or_else(|_| "null".into())
            )?;
        }
    }
    Ok(())
}

/// Executes `cfg`, writing data to `out` and diagnostics to `diag`.
/// Returns 0 on success, 1 on a numeric failure (or a failed check).
pub fn run(cfg: &RunConfig, out: &mut dyn Write, diag: &mut dyn Write) -> i32 {
    run_with(cfg, &Constants::STANDARD, out, diag)
}

/// [`run`] with injected mathematical constants (used by `selftest`).
pub fn run_with(
    cfg: &RunConfig,
    constants: &Constants,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> i32 {
    match execute(cfg, constants) {
        Ok((table, code)) => match emit(&table, cfg.format, out) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(diag, "error: cannot write output: {e}");
                EXIT_NUMERIC
            }
        },
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            match e {
                Error::Domain { .. } | Error::Tolerance { .. } | Error::Strip { .. } => EXIT_USAGE,
                _ => EXIT_NUMERIC,
            }
        }
    }
}

/// Runs the acceptance checks with the given constants and writes one row per
/// criterion; 0 iff every criterion passes.
pub fn selftest_with(
    constants: &Constants,
    level: Level,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> i32 {
    let cfg = RunConfig {
        command: Command::Selftest { level },
        tol: 1e-10,
        format: Format::Csv,
    };
    run_with(&cfg, constants, out, diag)
}

/// Entry point shared by the binary: parse, run and map to an exit code.
pub fn main_with_args<I, S>(argv: I, out: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(cfg) => run(&cfg, out, diag),
        Err(ParseOutcome::Info(text)) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Err(ParseOutcome::Usage(text)) => {
            let _ = write!(diag, "{text}");
            if !text.ends_with('\n') {
                let _ = writeln!(diag);
            }
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(args: &[&str]) -> Result<RunConfig, ParseOutcome> {
        parse_args(args.iter().copied())
    }

    #[test]
    fn parses_s_eval() {
        let c = parse(&["s-eval", "--a", "1", "--tol", "1e-11"]).unwrap();
        assert_eq!(c.tol, 1e-11);
        assert_eq!(
            c.command,
            Command::SEval {
                a: AValue::Decimal(1.0),
                route: None
            }
        );
        let c = parse(&["s-eval", "--a", "3/6", "--route", "rational"]).unwrap();
        assert_eq!(
            c.command,
            Command::SEval {
                a: AValue::Fraction(Rational::new(1, 2).unwrap()),
                route: Some(Route::Rational)
            }
        );
    }

    #[test]
    fn parses_zero_scan() {
        let c = parse(&["zeros", "--kmin", "25", "--kmax", "30", "--step", "0.1"]).unwrap();
        match c.command {
            Command::Zeros { range, kernel } => {
                assert_eq!((range.min, range.max, range.step), (25.0, 30.0, 0.1));
                assert_eq!(kernel, Kernel::Phi);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input_naming_the_flag() {
        for (args, flag) in [
            (vec!["s-eval", "--a", "-2"], "--a"),
            (vec!["s-eval", "--a", "x"], "--a"),
            (vec!["s-eval", "--a", "1", "--tol", "1e-2"], "--tol"),
            (vec!["phi-table", "--min", "3", "--max", "1"], "--min"),
            (vec!["ft-scan", "--step", "0"], "--step"),
            (vec!["ft-eval", "--re", "1", "--im", "1.5"], "--im"),
            (
                vec!["theorem-check", "--y", "10", "--eps", "1e-3,1e-2"],
                "--eps",
            ),
        ] {
            match parse(&args) {
                Err(ParseOutcome::Usage(m)) => assert!(m.contains(flag), "{m}"),
                other => panic!("{args:?}: {other:?}"),
            }
        }
        assert!(matches!(
            parse(&["frobnicate"]),
            Err(ParseOutcome::Usage(_))
        ));
        assert!(matches!(parse(&["--help"]), Err(ParseOutcome::Info(_))));
    }

    #[test]
    fn default_grids() {
        match parse(&["s-table"]).unwrap().command {
            Command::STable { range, .. } => assert_eq!(range.points().len(), 201),
            other => panic!("{other:?}"),
        }
        match parse(&["phi-table"]).unwrap().command {
            Command::PhiTable { range } => {
                let p = range.points();
                assert_eq!(p.len(), 401);
                assert_eq!(*p.last().unwrap(), 10.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn number_format_has_twelve_digits() {
        assert_eq!(fmt_num(0.130_330_700_753_906_3), "0.130330700754");
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(-2.5), "-2.5");
        assert_eq!(fmt_num(1.234_567_890_123_456e-9), "1.23456789012e-9");
        assert_eq!(fmt_num(6.02e23), "6.02e23");
        assert_eq!(fmt_num(28.269_450_283_469_39), "28.2694502835");
    }

    #[test]
    fn s_eval_row() {
        let cfg = parse(&["s-eval", "--a", "1"]).unwrap();
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(&cfg, &mut out, &mut err), 0);
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("a,value,abs_err,route,work"));
        assert!(lines.next().unwrap().starts_with("1,0.130330700754,"));
        assert!(err.is_empty());
    }

    #[test]
    fn json_is_single_object() {
        let cfg = parse(&["ft-eval", "--re", "2", "--format", "json"]).unwrap();
        let mut out = Vec::new();
        assert_eq!(run(&cfg, &mut out, &mut Vec::new()), 0);
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert!(v["value"]["re"].as_f64().unwrap() > 0.0);
    }

    proptest! {
        #[test]
        fn formatted_numbers_round_trip(m in -1f64..1.0, e in -30i32..30) {
            let x = m * 10f64.powi(e);
            let back: f64 = fmt_num(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 1e-11 * x.abs());
        }
    }
}
