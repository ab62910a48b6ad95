//! `superquad` command line: verification sweeps, certification and margin
//! search.
//!
//! Exit codes: 0 all holds, 1 a violation, 2 precondition failures or
//! unevaluable tuples only, 3 usage or configuration error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use superquad::bounds::{TheoremId, DEFAULT_TOLERANCE};
use superquad::functions::{certify, FunctionClass, FunctionModel, DEFAULT_GRID};
use superquad::harness::{
    minimize_margin_with, run_sweep, seed_from_env, write_report, ReportFormat, SearchConfig,
    SearchFamily, SweepSpec,
};
use superquad::sequences::SequenceSpec;
use superquad::{Error, Result};

const EXIT_USAGE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "superquad",
    version,
    about = "Check refinement inequalities for superquadratic averages"
)]
struct Cli {
    /// Relative tolerance on margins.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,

    /// Seed for random sequences and search restarts. Defaults to
    /// $SUPERQUAD_SEED, then 7.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every theorem × function × sequence × n × t tuple.
    Verify(VerifyArgs),
    /// Grid-check a function against a class.
    Certify(CertifyArgs),
    /// Minimise a theorem's margin over sequence generator parameters.
    Search(SearchArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Comma-separated theorem ids, e.g. `T1,T2`.
    #[arg(long, default_value = "")]
    theorems: String,
    /// Comma-separated function specs, e.g. `pow:2,pnorm:3`.
    #[arg(long, default_value = "")]
    functions: String,
    /// Comma-separated sequence specs, e.g. `arith:1,1,geom:1,1.5`.
    #[arg(long, default_value = "")]
    sequences: String,
    /// Inclusive range `lo..hi`, or a single n.
    #[arg(long, default_value = "2..100")]
    n: String,
    /// Comma-separated refinement depths.
    #[arg(long, default_value = "2")]
    t: String,
    /// Output file. Standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    /// Evaluate on one thread.
    #[arg(long)]
    serial: bool,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    function: String,
    /// superquadratic, subquadratic, increasing, convex or positive.
    #[arg(long)]
    class: String,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    theorem: String,
    #[arg(long)]
    function: String,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long, default_value_t = 5000)]
    budget: usize,
    /// Comma-separated families to search: arith, geom, pow.
    #[arg(long, default_value = "arith,geom,pow")]
    family: String,
    #[arg(long, default_value_t = 100)]
    n_max: usize,
    #[arg(long, default_value_t = superquad::bounds::DEFAULT_T)]
    t: usize,
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

/// Splits a list of sequence specs on commas. A piece without a `family:`
/// prefix continues the previous spec, so `arith:1,1,geom:1,1.5` yields two.
fn split_sequence_specs(s: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for piece in s.split(',').map(str::trim) {
        let starts_spec = piece.split_once(':').is_some_and(|(head, _)| {
            !head.is_empty() && head.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        });
        match out.last_mut() {
            Some(last) if !starts_spec => {
                last.push(',');
                last.push_str(piece);
            }
            _ if piece.is_empty() => {}
            _ => out.push(piece.to_string()),
        }
    }
    out
}

fn parse_n_range(s: &str) -> Result<std::ops::RangeInclusive<usize>> {
    let bad = |reason: &str| Error::Parse {
        kind: "n range",
        spec: s.to_string(),
        reason: reason.to_string(),
    };
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| bad(&e.to_string()));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (num(lo)?, num(hi.trim_start_matches('='))?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad("empty range"));
    }
    Ok(lo..=hi)
}

fn resolve_seed(cli: Option<u64>) -> Result<u64> {
    match cli {
        Some(s) => Ok(s),
        None => seed_from_env(),
    }
}

fn verify(args: &VerifyArgs, tolerance: f64, seed: u64) -> Result<u8> {
    let spec = SweepSpec {
        theorem_ids: split_list(&args.theorems)
            .map(str::parse)
            .collect::<Result<_>>()?,
        function_specs: split_list(&args.functions).map(String::from).collect(),
        sequence_specs: split_sequence_specs(&args.sequences)
            .iter()
            .map(|s| s.parse::<SequenceSpec>())
            .collect::<Result<_>>()?,
        n_range: parse_n_range(&args.n)?,
        t_values: split_list(&args.t)
            .map(|t| {
                t.parse::<usize>().map_err(|e| Error::Parse {
                    kind: "t",
                    spec: t.to_string(),
                    reason: e.to_string(),
                })
            })
            .collect::<Result<_>>()?,
        seed,
        tolerance,
        parallel: !args.serial,
    };
    let format: ReportFormat = args.format.parse()?;
    let result = run_sweep(&spec)?;

    match &args.out {
        Some(path) => superquad::emit_report(&result.rows, format, path)?,
        None => {
            let stdout = std::io::stdout();
            write_report(&result.rows, format, stdout.lock()).map_err(|source| Error::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
        }
    }

    let mut err = std::io::stderr().lock();
    for w in &result.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    for e in &result.errors {
        let _ = writeln!(err, "unevaluable: {e}");
    }
    let _ = writeln!(
        err,
        "{} rows: {} holds, {} violated, {} precondition_failed, {} unevaluable",
        result.rows.len(),
        result.holds,
        result.violated,
        result.precondition_failed,
        result.errors.len()
    );
    if let Some(row) = result.min_margin() {
        let r = &row.report;
        let _ = writeln!(
            err,
            "smallest relative margin: {} f={} seq={} n={} margin={:e}",
            r.theorem,
            r.function,
            r.sequences.join("|"),
            r.n,
            r.worst_margin() / r.scale()
        );
    }
    Ok(result.exit_code() as u8)
}

/// Pretty JSON on stdout. A closed pipe is not an error.
fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn certify_cmd(args: &CertifyArgs) -> Result<u8> {
    let f = FunctionModel::from_spec(&args.function)?;
    let class: FunctionClass = args.class.parse()?;
    let cert = certify(&f, class, args.grid)?;
    print_json(&cert)?;
    Ok(if cert.passed { 0 } else { 1 })
}

fn search_cmd(args: &SearchArgs, tolerance: f64, seed: u64) -> Result<u8> {
    let theorem: TheoremId = args.theorem.parse()?;
    let f = FunctionModel::from_spec(&args.function)?;
    let cfg = SearchConfig {
        families: split_list(&args.family)
            .map(str::parse)
            .collect::<Result<Vec<SearchFamily>>>()?,
        n_max: args.n_max,
        restarts: args.restarts,
        budget: args.budget,
        seed,
        t: args.t,
        tolerance,
    };
    let r = minimize_margin_with(theorem, &f, &cfg)?;
    print_json(&r)?;
    let violated = r.best_margin < -tolerance * r.best_report.scale();
    Ok(if violated { 1 } else { 0 })
}

fn run(cli: &Cli) -> Result<u8> {
    if !(cli.tolerance.is_finite() && cli.tolerance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be non-negative, got {}",
            cli.tolerance
        )));
    }
    let seed = resolve_seed(cli.seed)?;
    match &cli.command {
        Command::Verify(a) => verify(a, cli.tolerance, seed),
        Command::Certify(a) => certify_cmd(a),
        Command::Search(a) => search_cmd(a, cli.tolerance, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequence_lists_split_on_family_prefixes() {
        assert_eq!(
            split_sequence_specs("arith:1,1,geom:1,1.5,pow:2"),
            vec!["arith:1,1", "geom:1,1.5", "pow:2"]
        );
        assert_eq!(
            split_sequence_specs("rand:seed=7;cond=B,C,pow:0.5"),
            vec!["rand:seed=7;cond=B,C", "pow:0.5"]
        );
        assert!(split_sequence_specs("").is_empty());
    }

    #[test]
    fn n_ranges() {
        assert_eq!(parse_n_range("2..100").unwrap(), 2..=100);
        assert_eq!(parse_n_range("3..=5").unwrap(), 3..=5);
        assert_eq!(parse_n_range("7").unwrap(), 7..=7);
        assert!(parse_n_range("5..3").is_err());
        assert!(parse_n_range("a..3").is_err());
    }
}
