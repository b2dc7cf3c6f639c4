//! Command-line driver: argument parsing, dispatch, report output.
//!
//! Exit codes: 0 when the check passes, 1 when it fails (or a numerical
//! step fails), 2 for invalid input.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::fredholm::{self, Config, Context, KernelKind};
use crate::measures::{self, ParamSet, TruncationPolicy};
use crate::partitions::Partition;
use crate::qseries::rational_to_string;
use crate::scalar::{parse_rational, rational_to_f64, RationalRing};
use crate::symfunc;

#[derive(Debug, Parser)]
#[command(
    name = "qcauchy",
    version,
    about = "Restricted Cauchy identities and Fredholm determinant checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// `q`, as a decimal or `p/q`.
    #[arg(long, global = true, default_value = "0.15")]
    pub q: String,
    /// Comma-separated `a` values (decimal or `p/q`).
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        default_value = "0.30,0.28"
    )]
    pub a: Vec<String>,
    /// Comma-separated `b` values (decimal or `p/q`).
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        default_value = "0.25,0.20"
    )]
    pub b: Vec<String>,
    #[arg(long, global = true, default_value_t = 1.0)]
    pub t: f64,
    /// Threshold `k` (also `n`).
    #[arg(
        short = 'n',
        long = "k",
        global = true,
        default_value_t = 1,
        allow_hyphen_values = true
    )]
    pub k: i64,
    /// Series truncation order.
    #[arg(long, global = true, default_value_t = 8)]
    pub order: usize,
    /// Weight cutoff of brute-force sums.
    #[arg(long, global = true, default_value_t = 16)]
    pub cutoff: usize,
    /// Pass/fail tolerance (default 1e-6).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact series check of the restricted Cauchy identity for n = 0..=n_max.
    VerifyIdentity {
        #[arg(long, default_value_t = 3)]
        n_max: usize,
    },
    /// Tabulate the distribution identities over a range of n.
    CompareDistributions {
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        n_min: i64,
        #[arg(long, default_value_t = 6, allow_hyphen_values = true)]
        n_max: i64,
    },
    /// Compare det(1 - fK) and det(1 + fL) several ways.
    Fredholm(FredholmArgs),
    /// Evaluate a single polynomial or kernel entry.
    Eval {
        #[command(subcommand)]
        target: EvalTarget,
    },
}

#[derive(Debug, Args)]
pub struct FredholmArgs {
    /// Fixed window `lo:hi`; adaptive when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, default_value_t = 256)]
    pub quad_nodes: usize,
    #[arg(long, default_value_t = 3)]
    pub ell_max: usize,
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1)]
    pub omega: f64,
    /// Radii `r':r` of the two L contours.
    #[arg(long)]
    pub l_radii: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum EvalTarget {
    /// Skew Schur polynomial s_{λ/ρ}(a), exact.
    Schur {
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "")]
        rho: String,
    },
    /// q-Whittaker P_μ(a), exact in q.
    QwP {
        #[arg(long)]
        mu: String,
    },
    /// Dual q-Whittaker Q_μ(b), exact in q.
    QwQ {
        #[arg(long)]
        mu: String,
    },
    /// One entry of f(m1)·Kernel(m1, m2).
    Kernel {
        #[arg(long, value_enum, default_value_t = KernelArg::K)]
        kind: KernelArg,
        #[arg(long, default_value_t = 0)]
        ell: usize,
        #[arg(long, allow_hyphen_values = true)]
        m1: i64,
        #[arg(long, allow_hyphen_values = true)]
        m2: i64,
        #[arg(long, default_value_t = 256)]
        quad_nodes: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    K,
    L,
    KEll,
    KInf,
}

/// What a subcommand produced: a verdict and a serializable report.
pub struct Outcome {
    pub pass: bool,
    pub json: serde_json::Value,
    pub csv: Vec<Vec<String>>,
}

fn parse_list(flag: &str, values: &[String]) -> Result<Vec<BigRational>> {
    values
        .iter()
        .map(|v| {
            parse_rational(v).map_err(|e| match e {
                Error::Parse { value, reason, .. } => Error::Parse {
                    flag: flag.into(),
                    value,
                    reason,
                },
                other => other,
            })
        })
        .collect()
}

fn parse_partition(flag: &str, s: &str) -> Result<Partition> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Partition::empty());
    }
    let parts = s
        .split(',')
        .map(|x| {
            x.trim().parse::<usize>().map_err(|_| Error::Parse {
                flag: flag.into(),
                value: s.into(),
                reason: "expected comma-separated nonnegative integers".into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Partition::new(parts)
}

fn parse_window(s: &str) -> Result<(i64, i64)> {
    let bad = |reason: &str| Error::Parse {
        flag: "--window".into(),
        value: s.into(),
        reason: reason.into(),
    };
    let (lo, hi) = s.split_once(':').ok_or_else(|| bad("expected lo:hi"))?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad("lo is not an integer"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad("hi is not an integer"))?;
    if lo > hi {
        return Err(bad("lo > hi"));
    }
    Ok((lo, hi))
}

fn parse_radii(s: &str) -> Result<(f64, f64)> {
    let bad = |reason: &str| Error::Parse {
        flag: "--l-radii".into(),
        value: s.into(),
        reason: reason.into(),
    };
    let (a, b) = s.split_once(':').ok_or_else(|| bad("expected r':r"))?;
    let a: f64 = a.trim().parse().map_err(|_| bad("r' is not a number"))?;
    let b: f64 = b.trim().parse().map_err(|_| bad("r is not a number"))?;
    Ok((a, b))
}

fn q_rational(g: &Global) -> Result<BigRational> {
    Ok(parse_list("--q", std::slice::from_ref(&g.q))?.remove(0))
}

fn params(g: &Global) -> Result<ParamSet> {
    let to_f = |v: Vec<BigRational>| v.iter().map(rational_to_f64).collect::<Vec<_>>();
    let a = to_f(parse_list("--a", &g.a)?);
    let b = to_f(parse_list("--b", &g.b)?);
    let q = rational_to_f64(&q_rational(g)?);
    ParamSet::new(a, b, q, g.t, g.k)
}

fn trunc(g: &Global) -> TruncationPolicy {
    TruncationPolicy {
        weight_cutoff: g.cutoff,
        series_order: g.order,
        ..TruncationPolicy::default()
    }
}

fn tol(g: &Global) -> Result<f64> {
    let t = g.tol.unwrap_or(1e-6);
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::invalid(format!("--tol must be positive, got {t}")));
    }
    Ok(t)
}

fn to_json<T: Serialize>(v: &T) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im })
}

fn row<I: IntoIterator<Item = S>, S: ToString>(items: I) -> Vec<String> {
    items.into_iter().map(|s| s.to_string()).collect()
}

pub fn cmd_verify_identity(g: &Global, n_max: usize) -> Result<Outcome> {
    let a = parse_list("--a", &g.a)?;
    let b = parse_list("--b", &g.b)?;
    let reports = (0..=n_max)
        .map(|n| measures::verify_restricted_cauchy(n, &a, &b, g.order))
        .collect::<Result<Vec<_>>>()?;
    let pass = reports.iter().all(|r| r.equal);
    let mut csv = vec![row(["n", "power", "lhs", "rhs", "equal"])];
    for r in &reports {
        for (i, (l, h)) in r.lhs_coeffs.iter().zip(&r.rhs_coeffs).enumerate() {
            csv.push(row([
                r.n.to_string(),
                i.to_string(),
                l.clone(),
                h.clone(),
                (l == h).to_string(),
            ]));
        }
    }
    let json = json!({
        "a": a.iter().map(rational_to_string).collect::<Vec<_>>(),
        "b": b.iter().map(rational_to_string).collect::<Vec<_>>(),
        "order": g.order,
        "reports": to_json(&reports)?,
        "pass": pass,
    });
    Ok(Outcome { pass, json, csv })
}

pub fn cmd_compare_distributions(g: &Global, n_min: i64, n_max: i64) -> Result<Outcome> {
    if n_min > n_max {
        return Err(Error::invalid(format!("--n-min {n_min} > --n-max {n_max}")));
    }
    let p = params(g)?;
    let tol = tol(g)?;
    let ns: Vec<i64> = (n_min..=n_max).collect();
    let report = measures::compare_distributions(&p, &trunc(g), &ns)?;
    let pass = report.max_gap < tol;
    let mut csv = vec![row([
        "n",
        "mu1_plus_chi",
        "lambda1",
        "qlaplace",
        "lambda1_plus_shift",
        "mu1_plus_chi_plus_shift",
        "gap_first_row",
        "gap_shifted",
    ])];
    for r in &report.rows {
        csv.push(row([
            r.n.to_string(),
            format!("{:e}", r.mu1_plus_chi),
            format!("{:e}", r.lambda1),
            format!("{:e}", r.qlaplace),
            format!("{:e}", r.lambda1_plus_shift),
            format!("{:e}", r.mu1_plus_chi_plus_shift),
            format!("{:e}", r.gap_first_row),
            format!("{:e}", r.gap_shifted),
        ]));
    }
    let mut json = to_json(&report)?;
    json["tol"] = json!(tol);
    json["pass"] = json!(pass);
    Ok(Outcome { pass, json, csv })
}

fn fredholm_config(f: &FredholmArgs) -> Result<Config> {
    Ok(Config {
        eps: f.eps,
        omega: f.omega,
        nodes: f.quad_nodes,
        window: f.window.as_deref().map(parse_window).transpose()?,
        l_radii: f.l_radii.as_deref().map(parse_radii).transpose()?,
        ..Config::default()
    })
}

pub fn cmd_fredholm(g: &Global, f: &FredholmArgs) -> Result<Outcome> {
    let p = params(g)?;
    let tol = tol(g)?;
    let report = fredholm::verify_fredholm_identity(&p, fredholm_config(f)?, f.ell_max, tol)?;
    let mut csv = vec![row([
        "quantity",
        "ell",
        "value",
        "gap_to_f_inf",
        "kernel_gap",
    ])];
    for (name, d) in [
        ("F_window_K", &report.f_window_k),
        ("F_K_inf", &report.f_k_inf),
        ("F_L", &report.f_l),
    ] {
        csv.push(row([
            name.to_string(),
            String::new(),
            format!("{:e}", d.value),
            String::new(),
            String::new(),
        ]));
    }
    for c in &report.convergence {
        csv.push(row([
            "F_rank".to_string(),
            c.ell.to_string(),
            format!("{:e}", c.f_ell),
            format!("{:e}", c.gap_to_f_inf),
            format!("{:e}", c.kernel_gap),
        ]));
    }
    Ok(Outcome {
        pass: report.pass,
        json: to_json(&report)?,
        csv,
    })
}

pub fn cmd_eval(g: &Global, target: &EvalTarget) -> Result<Outcome> {
    let json = match target {
        EvalTarget::Schur { lambda, rho } => {
            let a = parse_list("--a", &g.a)?;
            let ring = RationalRing { q: q_rational(g)? };
            let l = parse_partition("--lambda", lambda)?;
            let r = parse_partition("--rho", rho)?;
            let v = symfunc::skew_schur(&ring, &l, &r, &a);
            json!({ "lambda": l, "rho": r, "value": rational_to_string(&v), "approx": rational_to_f64(&v) })
        }
        EvalTarget::QwP { mu } | EvalTarget::QwQ { mu } => {
            let dual = matches!(target, EvalTarget::QwQ { .. });
            let vars = if dual {
                parse_list("--b", &g.b)?
            } else {
                parse_list("--a", &g.a)?
            };
            let ring = RationalRing { q: q_rational(g)? };
            let m = parse_partition("--mu", mu)?;
            let v = if dual {
                symfunc::qwhittaker_q(&ring, &m, &vars)
            } else {
                symfunc::qwhittaker_p(&ring, &m, &vars)
            };
            json!({ "mu": m, "dual": dual, "value": rational_to_string(&v), "approx": rational_to_f64(&v) })
        }
        EvalTarget::Kernel {
            kind,
            ell,
            m1,
            m2,
            quad_nodes,
        } => {
            let p = params(g)?;
            let ctx = Context::new(
                &p,
                Config {
                    nodes: *quad_nodes,
                    ..Config::default()
                },
            )?;
            let f = ctx.fermi(*m1);
            let k = match kind {
                KernelArg::K => ctx.kernel_k(*m1, *m2),
                KernelArg::KEll => ctx.kernel_k_ell(*m1, *m2, *ell),
                KernelArg::KInf => ctx.kernel_k_inf(*m1, *m2)?,
                KernelArg::L => ctx.kernel_l(*m1, *m2, &ctx.l_contours()?),
            };
            let kind = match kind {
                KernelArg::K => KernelKind::K,
                KernelArg::KEll => KernelKind::KEll(*ell),
                KernelArg::KInf => KernelKind::KInf,
                KernelArg::L => KernelKind::L,
            };
            json!({ "kind": kind, "m1": m1, "m2": m2, "f": f, "kernel": complex_json(k), "f_kernel": complex_json(k * f) })
        }
    };
    let csv = match json.as_object() {
        Some(obj) => {
            let keys: Vec<String> = obj.keys().cloned().collect();
            let vals = obj.values().map(|v| v.to_string()).collect();
            vec![keys, vals]
        }
        None => vec![],
    };
    Ok(Outcome {
        pass: true,
        json,
        csv,
    })
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::VerifyIdentity { n_max } => cmd_verify_identity(g, *n_max),
        Command::CompareDistributions { n_min, n_max } => {
            cmd_compare_distributions(g, *n_min, *n_max)
        }
        Command::Fredholm(f) => cmd_fredholm(g, f),
        Command::Eval { target } => cmd_eval(g, target),
    }
}

fn render(out: &Outcome, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_vec_pretty(&out.json)?;
            s.push(b'\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &out.csv {
                w.write_record(r)?;
            }
            w.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Exit code for an error: 2 for bad input, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::Parse { .. } | Error::Io(_) => 2,
        _ => 1,
    }
}

/// Runs a parsed command line, writing the report and returning the exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = dispatch(cli).and_then(|out| {
        let bytes = render(&out, cli.global.format)?;
        match &cli.global.out {
            Some(p) => write_atomic(p, &bytes)?,
            None => std::io::stdout().write_all(&bytes)?,
        }
        Ok(out.pass)
    });
    match result {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("check failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
