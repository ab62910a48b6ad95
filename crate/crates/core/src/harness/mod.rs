//! Sweeps over theorem × function × sequence × n × t grids, margin
//! minimisation over generator parameters, and report output.

mod report;
mod search;

pub use report::{emit_report, write_report, ReportFormat};
pub use search::{
    minimize_margin, minimize_margin_with, SearchConfig, SearchFamily, SearchParams, SearchResult,
};

use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    evaluate, BoundReport, Status, TheoremId, TheoremParams, DEFAULT_T, DEFAULT_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::functions::FunctionModel;
use crate::sequences::{Sequence, SequenceSpec};
use crate::summation::Summation;

/// Seed used when neither the caller nor `SUPERQUAD_SEED` provides one.
pub const DEFAULT_SEED: u64 = 7;
pub const SEED_ENV: &str = "SUPERQUAD_SEED";

/// `SUPERQUAD_SEED` if set and numeric, otherwise [`DEFAULT_SEED`].
pub fn seed_from_env() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::parse(
                "seed",
                &v,
                format!("{SEED_ENV} must be an unsigned integer"),
            )
        }),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub theorem_ids: Vec<TheoremId>,
    /// Function spec strings such as `pow:2`.
    pub function_specs: Vec<String>,
    pub sequence_specs: Vec<SequenceSpec>,
    pub n_range: RangeInclusive<usize>,
    /// Refinement depths, used by bounds with a `t`-sum only.
    pub t_values: Vec<usize>,
    /// Seed for random sequence families without their own.
    pub seed: u64,
    /// Relative tolerance on margins.
    pub tolerance: f64,
    /// Evaluate tuples on the rayon pool. Results are ordered by tuple index
    /// either way.
    pub parallel: bool,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            theorem_ids: Vec::new(),
            function_specs: Vec::new(),
            sequence_specs: Vec::new(),
            n_range: 2..=100,
            t_values: vec![DEFAULT_T],
            seed: DEFAULT_SEED,
            tolerance: DEFAULT_TOLERANCE,
            parallel: true,
        }
    }
}

/// One evaluated tuple.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub report: BoundReport,
    pub status: Status,
    /// Set when a suspected violation did not survive the exact recheck.
    pub recheck_cleared: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub holds: usize,
    pub violated: usize,
    pub precondition_failed: usize,
    /// Tuples that could not be evaluated, e.g. an argument outside the
    /// function's domain.
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
    /// Index into `rows` of the smallest relative margin among rows whose
    /// hypotheses hold.
    pub min_margin_row: Option<usize>,
}

impl SweepResult {
    /// 0 when everything holds, 1 on any violation, 2 when there are only
    /// precondition failures or unevaluable tuples.
    pub fn exit_code(&self) -> i32 {
        if self.violated > 0 {
            1
        } else if self.precondition_failed > 0 || !self.errors.is_empty() {
            2
        } else {
            0
        }
    }

    pub fn min_margin(&self) -> Option<&SweepRow> {
        self.min_margin_row.map(|i| &self.rows[i])
    }
}

struct Tuple {
    theorem: TheoremId,
    function: usize,
    sequences: Vec<usize>,
    n: usize,
    t: Option<usize>,
}

/// All ordered `k`-tuples of `0..count`, with repetition.
fn index_tuples(count: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..count).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

pub(crate) fn sequence_label(specs: &[String]) -> String {
    specs.join("|")
}

/// Evaluates one instance and re-checks a suspected violation with exact
/// summation. Returns the report, its status, and whether the recheck
/// cleared it.
pub(crate) fn evaluate_checked(
    theorem: TheoremId,
    f: &FunctionModel,
    seqs: &[Sequence],
    params: TheoremParams,
    tolerance: f64,
) -> Result<(BoundReport, Status, bool)> {
    let report = evaluate(theorem, f, seqs, params)?;
    let status = report.status(tolerance);
    if status != Status::Violated {
        return Ok((report, status, false));
    }
    let exact = evaluate(theorem, f, seqs, params.with_summation(Summation::Exact))?;
    let exact_status = exact.status(tolerance);
    let cleared = exact_status != Status::Violated;
    Ok((exact, exact_status, cleared))
}

/// Runs every tuple of `spec`. Deterministic for a fixed spec.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if !(spec.tolerance.is_finite() && spec.tolerance >= 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be non-negative, got {}",
            spec.tolerance
        )));
    }
    let functions: Vec<FunctionModel> = spec
        .function_specs
        .iter()
        .map(|s| FunctionModel::from_spec(s))
        .collect::<Result<_>>()?;
    let seq_labels: Vec<String> = spec.sequence_specs.iter().map(|s| s.to_string()).collect();

    let mut result = SweepResult::default();
    let mut tuples = Vec::new();
    for &theorem in &spec.theorem_ids {
        let (lo, hi) = (*spec.n_range.start(), *spec.n_range.end());
        let lo_clipped = lo.max(theorem.min_n());
        if lo_clipped > hi {
            result.warnings.push(format!(
                "{theorem}: n range {lo}..={hi} lies below the admissible n ≥ {}; skipped",
                theorem.min_n()
            ));
            continue;
        }
        if lo_clipped != lo {
            result.warnings.push(format!(
                "{theorem}: n range {lo}..={hi} clipped to {lo_clipped}..={hi}"
            ));
        }
        let arity = theorem.arity();
        if arity > 0 && spec.sequence_specs.is_empty() {
            result.warnings.push(format!(
                "{theorem}: needs {arity} sequence(s) but none were given; skipped"
            ));
            continue;
        }
        let ts: Vec<Option<usize>> = if theorem.uses_t() {
            if spec.t_values.is_empty() {
                vec![Some(DEFAULT_T)]
            } else {
                spec.t_values.iter().map(|&t| Some(t)).collect()
            }
        } else {
            vec![None]
        };
        for function in 0..functions.len() {
            for seqs in index_tuples(spec.sequence_specs.len(), arity) {
                for n in lo_clipped..=hi {
                    for &t in &ts {
                        tuples.push(Tuple {
                            theorem,
                            function,
                            sequences: seqs.clone(),
                            n,
                            t,
                        });
                    }
                }
            }
        }
    }

    let eval = |tuple: &Tuple| -> std::result::Result<SweepRow, String> {
        let f = &functions[tuple.function];
        let labels: Vec<String> = tuple
            .sequences
            .iter()
            .map(|&i| seq_labels[i].clone())
            .collect();
        let describe = |e: Error| {
            format!(
                "{} f={} seq={} n={}: {e}",
                tuple.theorem,
                f.name(),
                sequence_label(&labels),
                tuple.n
            )
        };
        let seqs: Vec<Sequence> = tuple
            .sequences
            .iter()
            .map(|&i| spec.sequence_specs[i].generate_seeded(tuple.n + 1, spec.seed))
            .collect::<Result<_>>()
            .map_err(describe)?;
        let mut params = TheoremParams::new(tuple.n);
        params.t = tuple.t;
        let (mut report, status, recheck_cleared) =
            evaluate_checked(tuple.theorem, f, &seqs, params, spec.tolerance).map_err(describe)?;
        report.sequences = labels;
        Ok(SweepRow {
            report,
            status,
            recheck_cleared,
        })
    };
    let outcomes: Vec<std::result::Result<SweepRow, String>> = if spec.parallel {
        tuples.par_iter().map(eval).collect()
    } else {
        tuples.iter().map(eval).collect()
    };

    let mut best: Option<(f64, usize)> = None;
    for outcome in outcomes {
        match outcome {
            Ok(row) => {
                match row.status {
                    Status::Holds => result.holds += 1,
                    Status::Violated => result.violated += 1,
                    Status::PreconditionFailed => result.precondition_failed += 1,
                }
                if row.recheck_cleared {
                    let r = &row.report;
                    result.warnings.push(format!(
                        "{} f={} seq={} n={}: suspected violation cleared by exact recheck",
                        r.theorem,
                        r.function,
                        sequence_label(&r.sequences),
                        r.n
                    ));
                }
                if row.status != Status::PreconditionFailed {
                    let rel = row.report.worst_margin() / row.report.scale();
                    if best.is_none_or(|(m, _)| rel < m) {
                        best = Some((rel, result.rows.len()));
                    }
                }
                result.rows.push(row);
            }
            Err(e) => result.errors.push(e),
        }
    }
    result.min_margin_row = best.map(|b| b.1);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(
        theorems: &[TheoremId],
        functions: &[&str],
        seqs: &[&str],
        n: RangeInclusive<usize>,
    ) -> SweepSpec {
        SweepSpec {
            theorem_ids: theorems.to_vec(),
            function_specs: functions.iter().map(|s| s.to_string()).collect(),
            sequence_specs: seqs.iter().map(|s| s.parse().unwrap()).collect(),
            n_range: n,
            ..SweepSpec::default()
        }
    }

    #[test]
    fn a_lower_sweep() {
        let r = run_sweep(&spec(&[TheoremId::ALower], &["pow:2"], &[], 3..=10)).unwrap();
        assert_eq!(r.rows.len(), 8);
        assert_eq!(r.violated, 0);
        assert_eq!(r.holds, 8);
        assert_eq!(r.exit_code(), 0);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn empty_sweep() {
        let r = run_sweep(&SweepSpec::default()).unwrap();
        assert!(r.rows.is_empty());
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn t1_sweep() {
        let r = run_sweep(&spec(&[TheoremId::T1], &["pow:2"], &["arith:1,1"], 2..=100)).unwrap();
        assert_eq!(r.rows.len(), 99);
        assert_eq!(r.violated, 0);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn clipping_is_recorded() {
        let r = run_sweep(&spec(&[TheoremId::ALower], &["pow:2"], &[], 1..=4)).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.warnings.len(), 1);
        let r = run_sweep(&spec(&[TheoremId::ALower], &["pow:2"], &[], 1..=2)).unwrap();
        assert!(r.rows.is_empty());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn unknown_identifiers_are_errors() {
        assert!(run_sweep(&spec(&[TheoremId::ALower], &["sin"], &[], 3..=4)).is_err());
    }

    #[test]
    fn t_only_multiplies_t2() {
        let mut s = spec(
            &[TheoremId::T1, TheoremId::T2],
            &["pow:2"],
            &["arith:1,1"],
            2..=5,
        );
        s.t_values = vec![0, 1, 2];
        let r = run_sweep(&s).unwrap();
        assert_eq!(r.rows.len(), 4 + 4 * 3);
        assert!(r
            .rows
            .iter()
            .filter(|row| row.report.theorem == TheoremId::T1)
            .all(|row| row.report.t.is_none()));
    }

    #[test]
    fn multi_sequence_theorems_take_all_ordered_tuples() {
        let r = run_sweep(&spec(
            &[TheoremId::T3],
            &["pow:2"],
            &["arith:1,1", "geom:1,1.5"],
            3..=3,
        ))
        .unwrap();
        assert_eq!(r.rows.len() + r.errors.len(), 8);
    }

    #[test]
    fn precondition_failures_give_exit_code_two() {
        let r = run_sweep(&spec(&[TheoremId::ALower], &["pow:1.5"], &[], 3..=5)).unwrap();
        assert_eq!(r.precondition_failed, 3);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn violations_give_exit_code_one() {
        let r = run_sweep(&spec(
            &[TheoremId::SeqUpper],
            &["pow:2"],
            &["arith:1,1"],
            2..=2,
        ))
        .unwrap();
        assert_eq!(r.violated, 1);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn serial_and_parallel_agree() {
        let mut s = spec(
            &[TheoremId::T2, TheoremId::T8],
            &["pow:2", "pow:1.5"],
            &["arith:1,1", "pow:2"],
            2..=30,
        );
        let par = run_sweep(&s).unwrap();
        s.parallel = false;
        let ser = run_sweep(&s).unwrap();
        assert_eq!(par.rows.len(), ser.rows.len());
        for (a, b) in par.rows.iter().zip(&ser.rows) {
            assert_eq!(a.report.margin.to_bits(), b.report.margin.to_bits());
            assert_eq!(a.status, b.status);
        }
        assert_eq!(par.min_margin_row, ser.min_margin_row);
    }

    #[test]
    fn index_tuples_enumerates_with_repetition() {
        assert_eq!(index_tuples(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(
            index_tuples(2, 2),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        assert!(index_tuples(0, 1).is_empty());
    }
}
