//! Grid driver behind the `qstarlike` binary.
//!
//! Every subcommand emits flat records with the columns
//! `case,nu,q,theorem,k,quantity,lower,upper,radius,residual,flags`, in
//! the order case, then ν ascending, then q ascending.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{theorem_bounds, Quantity};
use crate::classical::{classical_first_zeros, comparison_check, limit_convergence_check};
use crate::error::{Error, Result};
use crate::euler_rayleigh::{er_bracket, newton_power_sums, reconcile};
use crate::flags::Flag;
use crate::qseries::QDomainParams;
use crate::radius::starlike_radius_with;
use crate::series::{CoefficientStream, Family, FunctionCase, DEFAULT_MAX_TERMS};

/// Environment variable overriding the series term cap.
pub const MAX_TERMS_ENV: &str = "QSTARLIKE_MAX_TERMS";

pub const CSV_HEADER: &str = "case,nu,q,theorem,k,quantity,lower,upper,radius,residual,flags";

const DEFAULT_NU: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const DEFAULT_Q: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];
const DEFAULT_LIMIT_NU: [f64; 2] = [0.5, 1.0];
const DEFAULT_LIMIT_Q: [f64; 3] = [0.9, 0.99, 0.999];
const DEFAULT_COMPARE_NU: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 5.0];

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARGS: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "qstarlike",
    version,
    about = "Radii of starlikeness of normalized q-Bessel functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Radius by bisection, with the oracle bracket it started from.
    Radius(GridArgs),
    /// Theorem bounds after sign normalization.
    Bounds(GridArgs),
    /// Newton power sums and Euler-Rayleigh brackets for k = 1..K.
    Sums(GridArgs),
    /// Printed closed-form sums against the Newton oracle.
    Reconcile(GridArgs),
    /// Scaled theorem bounds against their classical limits as q → 1.
    Limits(GridArgs),
    /// Hahn-Exton against Jackson limit displays.
    Compare(GridArgs),
    /// Theorem bounds together with the computed radius.
    Table(GridArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Comma-separated cases (F2,G2,H2,F3,G3,H3) or "all".
    #[arg(long, default_value = "all")]
    pub case: String,
    /// Comma-separated ν values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub nu: Vec<f64>,
    /// Comma-separated q values.
    #[arg(long, value_delimiter = ',')]
    pub q: Vec<f64>,
    /// Highest power-sum order.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Relative tolerance, in (0, 1e-3].
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Exit non-zero on domain or convergence errors.
    #[arg(long)]
    pub strict: bool,
}

/// One output record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub case: FunctionCase,
    pub nu: f64,
    pub q: Option<f64>,
    pub theorem: String,
    pub k: Option<usize>,
    pub quantity: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub radius: Option<f64>,
    pub residual: Option<f64>,
    pub flags: String,
}

impl Record {
    fn new(case: FunctionCase, nu: f64, q: Option<f64>, theorem: impl Into<String>) -> Self {
        Record {
            case,
            nu,
            q,
            theorem: theorem.into(),
            k: None,
            quantity: String::new(),
            lower: None,
            upper: None,
            radius: None,
            residual: None,
            flags: String::new(),
        }
    }

    fn failed(case: FunctionCase, nu: f64, q: Option<f64>, err: &Error) -> Self {
        let mut r = Record::new(case, nu, q, case.theorem().to_string());
        r.flags = error_flag(err).code().to_string();
        r
    }
}

fn error_flag(err: &Error) -> Flag {
    if err.is_domain() || matches!(err, Error::UnsupportedOrder { .. }) {
        Flag::DomainError
    } else {
        Flag::Convergence
    }
}

/// Exit code, standard output and standard error of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (program name first) and run.
pub fn run_from_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ARGS } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}

fn arg_error(msg: String) -> Outcome {
    Outcome {
        code: EXIT_ARGS,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

pub fn run(cli: Cli) -> Outcome {
    let (kind, args) = match &cli.command {
        Command::Radius(a) => (Kind::Radius, a),
        Command::Bounds(a) => (Kind::Bounds, a),
        Command::Sums(a) => (Kind::Sums, a),
        Command::Reconcile(a) => (Kind::Reconcile, a),
        Command::Limits(a) => (Kind::Limits, a),
        Command::Compare(a) => (Kind::Compare, a),
        Command::Table(a) => (Kind::Table, a),
    };
    let config = match Config::from_args(kind, args) {
        Ok(c) => c,
        Err(msg) => return arg_error(msg),
    };
    let (records, worst) = config.records();
    let body = match render(&records, args.format) {
        Ok(b) => b,
        Err(msg) => {
            return Outcome {
                code: EXIT_CONVERGENCE,
                stdout: String::new(),
                stderr: msg,
            };
        }
    };
    let code = match (args.strict, worst) {
        (true, Some(Flag::DomainError)) => EXIT_DOMAIN,
        (true, Some(_)) => EXIT_CONVERGENCE,
        _ => EXIT_OK,
    };
    match &args.output {
        Some(path) => match std::fs::write(path, body) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => arg_error(format!("cannot write {}: {e}", path.display())),
        },
        None => Outcome {
            code,
            stdout: body,
            stderr: String::new(),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Radius,
    Bounds,
    Sums,
    Reconcile,
    Limits,
    Compare,
    Table,
}

#[derive(Debug, Clone)]
struct Config {
    kind: Kind,
    cases: Vec<FunctionCase>,
    nus: Vec<f64>,
    qs: Vec<f64>,
    k: usize,
    tol: f64,
    max_terms: usize,
}

fn parse_cases(s: &str) -> std::result::Result<Vec<FunctionCase>, String> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(FunctionCase::ALL.to_vec());
    }
    let mut cases = s
        .split(',')
        .map(|p| p.parse::<FunctionCase>().map_err(|e| e.to_string()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    cases.sort();
    cases.dedup();
    Ok(cases)
}

fn sorted_grid(
    values: &[f64],
    default: &[f64],
    name: &str,
) -> std::result::Result<Vec<f64>, String> {
    let mut v = if values.is_empty() {
        default.to_vec()
    } else {
        values.to_vec()
    };
    if v.iter().any(|x| !x.is_finite()) {
        return Err(format!("--{name} values must be finite"));
    }
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

impl Config {
    fn from_args(kind: Kind, a: &GridArgs) -> std::result::Result<Self, String> {
        if !(a.tol > 0.0 && a.tol <= 1e-3) {
            return Err(format!("--tol {} is outside (0, 1e-3]", a.tol));
        }
        if a.k == 0 {
            return Err("--k must be at least 1".into());
        }
        let max_terms = match std::env::var(MAX_TERMS_ENV) {
            Ok(v) => match v.trim().parse::<usize>() {
                Ok(n) if n >= 8 => n,
                _ => return Err(format!("{MAX_TERMS_ENV}={v} is not an integer >= 8")),
            },
            Err(_) => DEFAULT_MAX_TERMS,
        };
        let (nu_default, q_default): (&[f64], &[f64]) = match kind {
            Kind::Limits => (&DEFAULT_LIMIT_NU, &DEFAULT_LIMIT_Q),
            Kind::Compare => (&DEFAULT_COMPARE_NU, &[]),
            _ => (&DEFAULT_NU, &DEFAULT_Q),
        };
        let mut cases = parse_cases(&a.case)?;
        if kind == Kind::Compare {
            cases.retain(|c| c.family() == Family::HahnExton);
            if cases.is_empty() {
                return Err("compare takes Hahn-Exton cases (F3, G3, H3)".into());
            }
        }
        Ok(Config {
            kind,
            cases,
            nus: sorted_grid(&a.nu, nu_default, "nu")?,
            qs: sorted_grid(&a.q, q_default, "q")?,
            k: a.k,
            tol: a.tol,
            max_terms,
        })
    }

    /// All records, plus the most severe error flag raised.
    fn records(&self) -> (Vec<Record>, Option<Flag>) {
        let jobs: Vec<(FunctionCase, f64, Option<f64>)> = match self.kind {
            Kind::Limits | Kind::Compare => self
                .cases
                .iter()
                .flat_map(|&c| self.nus.iter().map(move |&nu| (c, nu, None)))
                .collect(),
            _ => self
                .cases
                .iter()
                .flat_map(|&c| {
                    self.nus
                        .iter()
                        .flat_map(move |&nu| self.qs.iter().map(move |&q| (c, nu, Some(q))))
                })
                .collect(),
        };
        let rows: Vec<Vec<Record>> = jobs
            .par_iter()
            .map(|&(case, nu, q)| {
                self.point(case, nu, q)
                    .unwrap_or_else(|e| vec![Record::failed(case, nu, q, &e)])
            })
            .collect();
        let records: Vec<Record> = rows.into_iter().flatten().collect();
        let worst = records
            .iter()
            .filter_map(|r| {
                if r.flags.split(',').any(|f| f == Flag::DomainError.code()) {
                    Some(Flag::DomainError)
                } else if r.flags.split(',').any(|f| f == Flag::Convergence.code()) {
                    Some(Flag::Convergence)
                } else {
                    None
                }
            })
            .min();
        (records, worst)
    }

    fn point(&self, case: FunctionCase, nu: f64, q: Option<f64>) -> Result<Vec<Record>> {
        match self.kind {
            Kind::Compare => return self.compare_rows(case, nu),
            Kind::Limits => return self.limit_rows(case, nu),
            _ => {}
        }
        let q = q.expect("grid points carry q");
        let params = QDomainParams::new(nu, q)?;
        case.check_domain(params)?;
        match self.kind {
            Kind::Radius => self.radius_rows(case, params),
            Kind::Bounds => self.bound_rows(case, params, false),
            Kind::Table => self.bound_rows(case, params, true),
            Kind::Sums => self.sum_rows(case, params),
            Kind::Reconcile => self.reconcile_rows(case, params),
            Kind::Limits | Kind::Compare => unreachable!(),
        }
    }

    fn radius_rows(&self, case: FunctionCase, params: QDomainParams) -> Result<Vec<Record>> {
        let res = starlike_radius_with(case, params, self.tol, self.max_terms)?;
        let mut r = Record::new(
            case,
            params.nu(),
            Some(params.q()),
            case.theorem().to_string(),
        );
        let b = res.bracket.map(|u| case.radius_from_u(u));
        r.k = Some(res.bracket.order);
        r.quantity = Quantity::Radius.tag().into();
        r.lower = Some(b.lower);
        r.upper = Some(b.upper);
        r.radius = Some(res.radius);
        r.residual = Some(res.relative_residual());
        if res.expanded {
            r.flags = Flag::Expanded.code().into();
        }
        Ok(vec![r])
    }

    fn bound_rows(
        &self,
        case: FunctionCase,
        params: QDomainParams,
        with_radius: bool,
    ) -> Result<Vec<Record>> {
        let set = theorem_bounds(case, params)?;
        let radius = if with_radius {
            Some(starlike_radius_with(
                case,
                params,
                self.tol,
                self.max_terms,
            )?)
        } else {
            None
        };
        Ok(set
            .brackets
            .iter()
            .map(|tb| {
                let mut r =
                    Record::new(case, params.nu(), Some(params.q()), set.theorem.to_string());
                let mut flags = tb.flags.clone();
                r.k = Some(tb.chain);
                r.quantity = set.quantity.tag().into();
                r.lower = Some(tb.bracket.lower);
                r.upper = Some(tb.bracket.upper);
                if let Some(res) = &radius {
                    let x = set.quantity.of_radius(res.radius);
                    if !tb.bracket.contains(x) {
                        flags.push(Flag::BracketMiss);
                    }
                    r.radius = Some(x);
                    r.residual = Some(res.relative_residual());
                }
                r.flags = Flag::join(&flags);
                r
            })
            .collect())
    }

    fn sum_rows(&self, case: FunctionCase, params: QDomainParams) -> Result<Vec<Record>> {
        let stream = CoefficientStream::auto(case, params, self.max_terms)?;
        let sums = newton_power_sums(&stream, self.k + 1)?;
        (1..=self.k)
            .map(|k| {
                let b = er_bracket(&sums, k)?;
                let mut r = Record::new(case, params.nu(), Some(params.q()), "oracle");
                r.k = Some(k);
                r.quantity = "power_sum".into();
                r.lower = Some(b.lower);
                r.upper = Some(b.upper);
                r.radius = sums.get(k);
                Ok(r)
            })
            .collect()
    }

    fn reconcile_rows(&self, case: FunctionCase, params: QDomainParams) -> Result<Vec<Record>> {
        let report = reconcile(case, params, self.k)?;
        Ok(report
            .rows
            .iter()
            .map(|row| {
                let mut r = Record::new(
                    case,
                    params.nu(),
                    Some(params.q()),
                    case.theorem().to_string(),
                );
                r.k = Some(row.order);
                r.quantity = "power_sum".into();
                r.lower = Some(row.newton);
                r.upper = Some(row.closed_form);
                r.radius = Some(row.corrected.unwrap_or(row.closed_form));
                r.residual = Some(row.rel_diff);
                r.flags = Flag::join(&row.flags);
                r
            })
            .collect())
    }

    fn limit_rows(&self, case: FunctionCase, nu: f64) -> Result<Vec<Record>> {
        let table = limit_convergence_check(case, nu, &self.qs)?;
        let target = classical_first_zeros(nu, 1e-15)
            .ok()
            .and_then(|z| table.target.value(&z));
        Ok(table
            .rows
            .iter()
            .map(|row| {
                let mut r = Record::new(case, nu, Some(row.q), case.theorem().to_string());
                let mut flags = Vec::new();
                if table.target.is_scaled() {
                    flags.push(Flag::ScaleTag);
                }
                if table.not_decreasing.contains(&row.chain) {
                    flags.push(Flag::NotDecreasing);
                }
                r.k = Some(row.chain);
                r.quantity = table.target.tag().into();
                r.lower = Some(row.scaled_lower);
                r.upper = Some(row.scaled_upper);
                r.radius = target;
                r.residual = Some(row.rel_error);
                r.flags = Flag::join(&flags);
                r
            })
            .collect())
    }

    fn compare_rows(&self, case: FunctionCase, nu: f64) -> Result<Vec<Record>> {
        Ok(comparison_check(&[nu])?
            .into_iter()
            .filter(|row| row.case == case)
            .map(|row| {
                let mut r = Record::new(case, nu, None, "classical");
                r.k = Some(row.chain);
                r.quantity = row.side.tag().into();
                r.lower = Some(row.hahn_exton);
                r.upper = Some(row.jackson);
                r.residual = Some(row.jackson - row.hahn_exton);
                if !row.holds {
                    r.flags = Flag::Violated.code().into();
                }
                r
            })
            .collect())
    }
}

/// Records as CSV (header always present) or a JSON array.
pub fn render(records: &[Record], format: Format) -> std::result::Result<String, String> {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(Vec::new());
            w.write_record(CSV_HEADER.split(','))
                .map_err(|e| e.to_string())?;
            for r in records {
                w.serialize(r).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
        Format::Json => serde_json::to_string_pretty(records)
            .map(|s| s + "\n")
            .map_err(|e| e.to_string()),
    }
}
