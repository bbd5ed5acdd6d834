//! The `eigenrep` command line.
//!
//! Polynomials are given as comma-separated integer coefficients, constant
//! term first: `"-1,-1,1"` is `X^2 - X - 1`. Artifacts go to stdout (or
//! `--output`), diagnostics to stderr.
//!
//! Exit codes:
//!
//! | code | meaning                                                        |
//! |------|----------------------------------------------------------------|
//! | 0    | success                                                        |
//! | 1    | internal check failure (`certify`) or failed verification (`check`) |
//! | 2    | unparsable input, non-monic polynomial, unreadable bundle      |
//! | 3    | polynomial has non-real roots                                  |
//! | 4    | repeated roots without `--allow-multiplicities`                |
//! | 5    | oracle search space exceeds the budget                         |

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::certify::{build_any, build_strict, CertificateBundle, EigenCertificate};
use crate::error::Error;
use crate::polyint::IntPoly;
use crate::verify::{self, brute_force_min_size_with, OracleResult, VerificationReport};
use crate::Execution;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_REAL: i32 = 3;
pub const EXIT_NOT_STRICT: i32 = 4;
pub const EXIT_BUDGET: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "eigenrep",
    version,
    about = "Realize totally real algebraic integers as eigenvalues of small symmetric integer matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a symmetric matrix whose characteristic polynomial is divisible by f.
    Certify(CertifyArgs),
    /// Re-verify a certificate bundle written by `certify --json`.
    Check(CheckArgs),
    /// Exhaustively search for the smallest symmetric matrix realizing f.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    /// Coefficients, constant term first (e.g. "-1,-1,1" for X^2 - X - 1).
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// Emit the JSON certificate bundle instead of a text summary.
    #[arg(long)]
    pub json: bool,
    /// Accept polynomials with repeated roots (direct sum over squarefree factors).
    #[arg(long)]
    pub allow_multiplicities: bool,
    /// Write the output to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Certificate bundle (JSON).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Emit the report as JSON.
    #[arg(long)]
    pub json: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    /// Coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    pub poly: String,
    /// Largest matrix size to try.
    #[arg(long)]
    pub max_size: usize,
    /// Entries range over [-max_entry, max_entry].
    #[arg(long)]
    pub max_entry: u32,
    /// Refuse searches with more candidate matrices than this.
    #[arg(long, default_value_t = verify::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Enumerate on one thread.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub json: bool,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match &cli.command {
        Command::Certify(a) => run_certify(a, out, err),
        Command::Check(a) => run_check(a, out, err),
        Command::Oracle(a) => run_oracle(a, out, err),
    }
}

fn emit(text: &str, path: Option<&PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> bool {
    let res = match path {
        Some(p) => std::fs::write(p, text),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = res {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return false;
    }
    true
}

fn parse_monic(s: &str, err: &mut dyn Write) -> Result<IntPoly, i32> {
    let f: IntPoly = s.parse().map_err(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_INPUT
    })?;
    if !f.is_monic() || f.degree().is_none_or(|d| d == 0) {
        let _ = writeln!(
            err,
            "error: {} is not monic of positive degree (coefficients are constant term first)",
            f.pretty()
        );
        return Err(EXIT_INPUT);
    }
    Ok(f)
}

pub fn run_certify(args: &CertifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let f = match parse_monic(&args.poly, err) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let g = f.squarefree_part().expect("monic");
    let distinct = g.sturm_distinct_real_roots().expect("nonzero");
    let needed = g.degree().unwrap_or(0);
    if distinct != needed {
        let _ = writeln!(
            err,
            "error: {} is not real-rooted: Sturm count gives {distinct} real roots of {needed} required",
            f.pretty()
        );
        return EXIT_NOT_REAL;
    }
    let strict = needed == f.degree().unwrap_or(0);
    if !strict && !args.allow_multiplicities {
        let _ = writeln!(
            err,
            "error: {} has repeated roots; pass --allow-multiplicities to build a direct sum",
            f.pretty()
        );
        return EXIT_NOT_STRICT;
    }
    let built = if strict { build_strict(&f) } else { build_any(&f) };
    let cert = match built {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILED;
        }
    };
    let text = if args.json {
        let mut s = cert.to_json_string();
        s.push('\n');
        s
    } else {
        certificate_summary(&cert)
    };
    if emit(&text, args.output.as_ref(), out, err) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn certificate_summary(cert: &EigenCertificate) -> String {
    let (s_bits, q_bits, m_bits) = cert.bit_sizes();
    let mut s = String::new();
    s.push_str(&format!("f      = {}\n", cert.f.pretty()));
    s.push_str(&format!("degree = {}\n", cert.n));
    s.push_str(&format!(
        "size   = {} (bound {})\n",
        cert.size,
        crate::certify::SIZE_FACTOR * cert.n
    ));
    for fc in &cert.factors {
        s.push_str(&format!(
            "block  {} x{}: s = {}, m = {}, block size {}\n",
            fc.factor.pretty(),
            fc.multiplicity,
            fc.psatz.s,
            fc.psatz.m(),
            fc.size()
        ));
    }
    s.push_str(&format!("bits   s <= {s_bits}, Q <= {q_bits}, M <= {m_bits}\n"));
    s.push_str(&format!("checks {:?}\n", cert.checks));
    s.push_str("M =\n");
    s.push_str(&cert.matrix.to_string());
    s
}

pub fn run_check(args: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let raw = match std::fs::read_to_string(&args.input) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", args.input.display());
            return EXIT_INPUT;
        }
    };
    let bundle: CertificateBundle = match serde_json::from_str(&raw) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "error: malformed certificate bundle: {e}");
            return EXIT_INPUT;
        }
    };
    let report = verify::verify_certificate(&bundle);
    let text = if args.json {
        serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
    } else {
        report_text(&report)
    };
    for f in report.failed() {
        let _ = writeln!(err, "FAILED {}: {}", f.name, f.detail);
    }
    if !emit(&text, args.output.as_ref(), out, err) {
        return EXIT_INPUT;
    }
    if report.passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn report_text(report: &VerificationReport) -> String {
    let mut s = String::new();
    for f in &report.findings {
        let tag = if f.pass { "pass" } else { "FAIL" };
        s.push_str(&format!("[{tag}] {}: {}\n", f.name, f.detail));
    }
    s.push_str(if report.passed { "certificate verified\n" } else { "certificate REJECTED\n" });
    s
}

pub fn run_oracle(args: &OracleArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let f = match parse_monic(&args.poly, err) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let result = match brute_force_min_size_with(&f, args.max_size, args.max_entry, args.budget, exec) {
        Ok(r) => r,
        Err(e @ Error::BoundsTooLarge { .. }) => {
            let _ = writeln!(err, "error: {e}; raise --budget or shrink the bounds");
            return EXIT_BUDGET;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let text = if args.json {
        serde_json::to_string_pretty(&result).expect("result serializes") + "\n"
    } else {
        oracle_text(&result)
    };
    if emit(&text, args.output.as_ref(), out, err) {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn oracle_text(r: &OracleResult) -> String {
    let mut s = format!(
        "f = {}, sizes <= {}, entries in [-{e}, {e}], {} candidates examined\n",
        r.f.pretty(),
        r.search_bounds.max_size,
        r.candidates_examined,
        e = r.search_bounds.max_entry
    );
    match (&r.min_size_found, &r.witness) {
        (Some(size), Some(w)) => {
            s.push_str(&format!("minimal size {size}, witness:\n"));
            s.push_str(&w.to_string());
        }
        _ => s.push_str("none: no witness within bounds\n"),
    }
    s
}
