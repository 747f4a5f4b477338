//! The `hamming-spectra` command line: argument parsing, commands and JSON
//! reports.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure
//! (for instance a partition that is not equitable), 3 a function that
//! breaks a proven bound, which can only mean a bug.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::boundary::{nu, nu_via_fourier, relevant_indices};
use crate::bounds::{audit_with_spectrum, compare_regimes, edge_upper_bound, to_f64, ExactRational, Verdict, Winner};
use crate::equitable::{audit_partition, indicator_function, quotient_matrix};
use crate::fourier::{exact_spectrum_report, spectrum_report, transform};
use crate::search::{enumerate_boolean, sharpness_audit, EnumerationPlan, NoopVisitor, SearchOptions};
use crate::{DomainParams, Error, Result, SpectrumReport, ValueMode, DEFAULT_ZERO_TOLERANCE};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Parser)]
#[command(name = "hamming-spectra", version, about = "Spectra, relevant variables and bounds for functions on Z_q^n")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, edge boundary, relevant coordinates and bound audit of a table.
    Analyze {
        file: PathBuf,
        /// Decide coefficient zeros exactly (integer tables only).
        #[arg(long)]
        exact: bool,
        /// Zero tolerance for the floating-point transform.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Quotient matrix and bound audit of a partition.
    VerifyPartition { file: PathBuf },
    /// Compare the bounds with 4.394 * 2^(ceil(log2 q) d) over a grid.
    Bounds {
        /// `A..B`, `A-B` or a single value.
        #[arg(long, default_value = "3..7")]
        q_range: String,
        #[arg(long, default_value = "1..10")]
        d_range: String,
        /// Also evaluate this d' in every cell with d' <= d.
        #[arg(long)]
        d_prime: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Enumeration audits and minimum-support searches.
    Search {
        #[command(subcommand)]
        command: SearchCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum SearchCommand {
    /// Audit every (or a sample of) pm1 table on Z_q^n.
    Audit {
        n: usize,
        q: u32,
        /// Sample this many random tables instead of enumerating all.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Refuse exhaustive runs over more tables than this.
        #[arg(long, default_value_t = crate::search::DEFAULT_MAX_ENUM)]
        max_enum: u64,
        /// Visit one table per symmetry orbit (exhaustive only).
        #[arg(long)]
        symmetry: bool,
    },
    /// Smallest support of a function with spectrum in [k, m].
    Minsupport {
        k: usize,
        m: usize,
        n: usize,
        q: u32,
        #[arg(long)]
        no_symmetry: bool,
        /// Cap on support sets examined.
        #[arg(long, default_value_t = SearchOptions::default().max_candidates)]
        max_enum: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub timing_ms: f64,
}

impl Report {
    /// Pretty JSON without the timing field; stable across runs and
    /// worker counts.
    pub fn canonical_json(&self) -> String {
        let v = json!({
            "schema_version": self.schema_version,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
        });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// What a command found, independent of how it is printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
    TheoremViolated,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::VerificationFailed => 2,
            Status::TheoremViolated => 3,
        }
    }
}

pub struct Outcome {
    pub report: Report,
    pub status: Status,
    /// Human-readable rendering requested with `--format table`.
    pub table: Option<String>,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NotEquitable(_) => 2,
        Error::TheoremViolation(_) => 3,
        _ => 1,
    }
}

fn spectrum_json(s: &SpectrumReport) -> Value {
    json!({
        "weights": s.weight_support,
        "degree": s.degree,
        "d_prime": s.min_nonzero_weight,
    })
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

fn verdict_status(v: Verdict) -> Status {
    if v == Verdict::Fail {
        Status::TheoremViolated
    } else {
        Status::Ok
    }
}

pub fn cmd_analyze(text: &str, exact: bool, eps: Option<f64>) -> Result<(Value, Value, Status)> {
    let f = format::parse_function_table(text)?;
    let params = *f.params();
    let eps = eps.unwrap_or(DEFAULT_ZERO_TOLERANCE);
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::OutOfRange(format!("--eps must be nonnegative, got {eps}")));
    }
    // zero-one input is analysed as 1 - 2f
    let g = if f.mode().is_boolean() { f.to_pm1()? } else { f.clone() };
    let spectrum = if exact {
        if g.mode() == ValueMode::Complex {
            return Err(Error::WrongMode { expected: "integer-valued (for --exact)", actual: "cplx" });
        }
        exact_spectrum_report(&g)?
    } else {
        spectrum_report(&transform(&g, eps)?)
    };
    let relevant = relevant_indices(&f);
    let edges = nu(&f);
    let mut nu_json = json!({ "edges": edges });
    let mut status = Status::Ok;
    let bound = if f.mode().is_boolean() {
        nu_json["via_fourier"] = json!(nu_via_fourier(&f)?);
        if let Some(d) = spectrum.degree.filter(|&d| d >= 1) {
            let b = edge_upper_bound(d, params.n(), params.q())?;
            nu_json["upper_bound"] = json!(ExactRational::from(&b));
            nu_json["within_bound"] = json!(num_rational::BigRational::from_integer(edges.into()) <= b);
        }
        if params.q() >= 3 {
            let report = audit_with_spectrum(&f, &spectrum)?;
            status = verdict_status(report.verdict);
            serde_json::to_value(&report).expect("report serializes")
        } else {
            json!({ "skipped": "the relevant-variable bound needs q >= 3" })
        }
    } else {
        json!({ "skipped": "the relevant-variable bound applies to Boolean tables" })
    };
    let inputs = json!({
        "q": params.q(),
        "n": params.n(),
        "mode": f.mode().name(),
        "exact": exact,
        "eps": if exact { Value::Null } else { json!(eps) },
    });
    let results = json!({
        "spectrum": spectrum_json(&spectrum),
        "nu": nu_json,
        "relevant": one_based(&relevant),
        "bound": bound,
    });
    Ok((inputs, results, status))
}

pub fn cmd_verify_partition(text: &str) -> Result<(Value, Value, Status)> {
    let p = format::parse_partition(text)?;
    let params = *p.params();
    let qm = quotient_matrix(&p)?;
    let inputs = json!({ "q": params.q(), "n": params.n(), "r": p.class_count() });
    let mut results = json!({
        "quotient": qm.entries,
        "theta0": qm.theta0,
        "theta1": qm.theta1,
        "degree": qm.degree,
    });
    let mut status = Status::Ok;
    if p.class_count() == 2 {
        let indicator = indicator_function(&p, 1)?;
        results["indicator_spectrum"] = spectrum_json(&exact_spectrum_report(&indicator)?);
        results["relevant"] = json!(one_based(&relevant_indices(&indicator)));
        if params.q() >= 3 {
            let report = audit_partition(&p)?;
            status = verdict_status(report.verdict);
            results["audit"] = serde_json::to_value(&report).expect("report serializes");
        } else {
            results["audit"] = json!({ "skipped": "the relevant-variable bound needs q >= 3" });
        }
    } else {
        results["audit"] = json!({ "skipped": "the bound audit covers 2-class partitions only" });
    }
    Ok((inputs, results, status))
}

/// Parses `A..B`, `A-B`, `A:B` or `A`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u64>> {
    let bad = || Error::OutOfRange(format!("cannot read range `{s}`"));
    let (lo, hi) = match s.split_once("..").or_else(|| s.split_once('-')).or_else(|| s.split_once(':')) {
        Some((a, b)) => {
            (a.trim().parse().map_err(|_| bad())?, b.trim().trim_start_matches('=').parse().map_err(|_| bad())?)
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(Error::OutOfRange(format!("empty range `{s}`")));
    }
    Ok(lo..=hi)
}

fn winner_summary(winners: &[Winner]) -> &'static str {
    if winners.iter().all(|&w| w == Winner::Main) {
        "main"
    } else if winners.iter().all(|&w| w == Winner::Wellens) {
        "wellens"
    } else {
        "mixed"
    }
}

pub fn cmd_bounds(
    q_range: &str,
    d_range: &str,
    d_prime: Option<usize>,
    want_table: bool,
) -> Result<(Value, Value, Option<String>)> {
    let qs = parse_range(q_range)?;
    let ds = parse_range(d_range)?;
    if *qs.start() < 3 {
        return Err(Error::AlphabetTooSmall(*qs.start() as u32));
    }
    if *ds.start() < 1 {
        return Err(Error::OutOfRange("degrees start at 1".into()));
    }
    if *qs.end() > u32::MAX as u64 || *ds.end() > 4096 {
        return Err(Error::LimitExceeded("grid too large".into()));
    }
    let mut cells = Vec::new();
    let mut rows = Vec::new();
    let mut text = String::new();
    if want_table {
        text.push_str(&format!(
            "{:>4} {:>4} {:>22} {:>22} {:>22} {:>8} {:>8}\n",
            "q", "d", "d'=1", "d'=d", "wellens", "win d'=1", "win d'=d"
        ));
    }
    for q in qs.clone() {
        let q = q as u32;
        let mut deg_winners = Vec::new();
        let mut diag_winners = Vec::new();
        for d in ds.clone() {
            let d = d as usize;
            let degree_case = compare_regimes(1, d, q)?;
            let diagonal_case = compare_regimes(d, d, q)?;
            let general = d_prime.filter(|&dp| dp >= 1 && dp <= d).map(|dp| compare_regimes(dp, d, q)).transpose()?;
            deg_winners.push(degree_case.winner);
            diag_winners.push(diagonal_case.winner);
            if want_table {
                text.push_str(&format!(
                    "{:>4} {:>4} {:>22.6e} {:>22.6e} {:>22.6e} {:>8} {:>8}\n",
                    q,
                    d,
                    to_f64(&degree_case.bound),
                    to_f64(&diagonal_case.bound),
                    to_f64(&degree_case.wellens),
                    format!("{:?}", degree_case.winner).to_lowercase(),
                    format!("{:?}", diagonal_case.winner).to_lowercase(),
                ));
                if let Some(g) = &general {
                    text.push_str(&format!(
                        "{:>4} {:>4}   d'={:<3} {:>15.6e} -> {} (criterion {})\n",
                        "",
                        "",
                        g.d_prime,
                        to_f64(&g.bound),
                        format!("{:?}", g.winner).to_lowercase(),
                        g.dprime_criterion
                    ));
                }
            }
            cells.push(json!({
                "q": q,
                "d": d,
                "degree_case": degree_case,
                "diagonal_case": diagonal_case,
                "general": general,
            }));
        }
        rows.push(json!({
            "q": q,
            "degree_case_winner": winner_summary(&deg_winners),
            "diagonal_case_winner": winner_summary(&diag_winners),
        }));
    }
    let inputs = json!({
        "q_range": [qs.start(), qs.end()],
        "d_range": [ds.start(), ds.end()],
        "d_prime": d_prime,
    });
    Ok((inputs, json!({ "rows": rows, "cells": cells }), want_table.then_some(text)))
}

pub fn cmd_search_audit(
    n: usize,
    q: u32,
    samples: Option<u64>,
    seed: u64,
    max_enum: u64,
    symmetry: bool,
) -> Result<(Value, Value, Status)> {
    let params = DomainParams::new(n, q)?;
    let plan = match samples {
        Some(s) => EnumerationPlan::random(params, s, seed),
        None => EnumerationPlan::exhaustive(params),
    }
    .with_max_tables(max_enum)
    .with_symmetry_reduction(symmetry);
    let s = enumerate_boolean(&plan, &NoopVisitor)?;
    let inputs = json!({
        "n": n,
        "q": q,
        "mode": plan.mode,
        "max_enum": max_enum,
        "symmetry": symmetry,
    });
    let results = json!({
        "count_visited": s.count_visited,
        "representatives_visited": s.representatives_visited,
        "count_matching": s.count_matching,
        "pass": s.pass,
        "fail": s.fail,
        "not_applicable": s.not_applicable,
        "by_spectrum": s.by_spectrum,
        "worst_case": s.worst_case,
    });
    let status = if s.fail > 0 { Status::TheoremViolated } else { Status::Ok };
    Ok((inputs, results, status))
}

pub fn cmd_search_minsupport(
    k: usize,
    m: usize,
    n: usize,
    q: u32,
    symmetry: bool,
    max_candidates: u64,
) -> Result<(Value, Value, Status)> {
    let opts = SearchOptions { symmetry_reduction: symmetry, max_candidates, ..SearchOptions::default() };
    let record = sharpness_audit(k, m, n, q, &opts)?;
    let inputs = json!({ "k": k, "m": m, "n": n, "q": q, "symmetry": symmetry, "max_enum": max_candidates });
    Ok((inputs, serde_json::to_value(&record).expect("record serializes"), Status::Ok))
}

fn read(path: &PathBuf) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// Runs one parsed command on the current thread pool.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let start = Instant::now();
    let (name, inputs, results, status, table) = match &cli.command {
        Command::Analyze { file, exact, eps } => {
            let (i, r, s) = cmd_analyze(&read(file)?, *exact, *eps)?;
            ("analyze", i, r, s, None)
        }
        Command::VerifyPartition { file } => {
            let (i, r, s) = cmd_verify_partition(&read(file)?)?;
            ("verify-partition", i, r, s, None)
        }
        Command::Bounds { q_range, d_range, d_prime, format } => {
            let (i, r, t) = cmd_bounds(q_range, d_range, *d_prime, *format == OutputFormat::Table)?;
            ("bounds", i, r, Status::Ok, t)
        }
        Command::Search { command: SearchCommand::Audit { n, q, samples, seed, max_enum, symmetry } } => {
            let (i, r, s) = cmd_search_audit(*n, *q, *samples, *seed, *max_enum, *symmetry)?;
            ("search audit", i, r, s, None)
        }
        Command::Search { command: SearchCommand::Minsupport { k, m, n, q, no_symmetry, max_enum } } => {
            let (i, r, s) = cmd_search_minsupport(*k, *m, *n, *q, !no_symmetry, *max_enum)?;
            ("search minsupport", i, r, s, None)
        }
    };
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: name.to_string(),
        inputs,
        results,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(Outcome { report, status, table })
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be at least 1");
            return 1;
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return 1;
        }
    };
    match pool.install(|| execute(&cli)) {
        Ok(outcome) => {
            let text = outcome.table.unwrap_or_else(|| outcome.report.to_json() + "\n");
            let _ = write!(out, "{text}");
            if outcome.status == Status::TheoremViolated {
                let _ = writeln!(err, "error: a function exceeds a proven bound; this indicates a bug");
            }
            outcome.status.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}
