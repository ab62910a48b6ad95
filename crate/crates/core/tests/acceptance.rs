//! Acceptance criteria. Runs without the libtest harness and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superquad::bounds::{
    thm1_lower, thm_a_lower, thm_upper_a_general, thm_upper_a_positive, Status,
};
use superquad::functions::{
    catalog, certify, check_monotone_convex_positive, power, xlog, FunctionClass, DEFAULT_GRID,
};
use superquad::harness::{run_sweep, SweepSpec};
use superquad::{
    avg_a, avg_b, jensen_refinement, lemma1_chain, FunctionModel, Sequence, TheoremId,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

/// Closed forms of both averages of x² for n up to 10^4.
fn exact_averages() -> Outcome {
    let sq = power(2.0);
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut worst_n = 0;
    for n in 2..=10_000usize {
        let nf = n as f64;
        let a = avg_a(&sq, n).unwrap().value;
        let b = avg_b(&sq, n).unwrap().value;
        let ea = rel_err(a, (2.0 * nf - 1.0) / (6.0 * nf));
        let eb = rel_err(b, (2.0 * nf + 1.0) / (6.0 * nf));
        if ea.max(eb) > worst {
            worst = ea.max(eb);
            worst_n = n;
        }
    }
    let took = start.elapsed();
    outcome(
        worst <= 1e-13 && took < Duration::from_secs(5),
        format!(
            "max rel err {worst:.3e} at n={worst_n} (limit 1e-13), {}",
            secs(took)
        ),
    )
}

/// Every refinement that is an identity for x² closes to zero.
fn equality_at_square() -> Outcome {
    let sq = power(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(3..=50usize);
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let points: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let j = jensen_refinement(&sq, &weights, &points).unwrap();
        worst = worst.max(j.margins[0].abs());

        let (x, y) = (rng.random::<f64>(), rng.random::<f64>());
        let lam = rng.random_range(0.0..=1.0);
        let t = rng.random_range(1..=3usize);
        let c = lemma1_chain(&sq, x, y, lam, t).unwrap();
        worst = worst.max(c.margins[0].abs()).max(c.margins[1].abs());
    }
    for n in 3..=50 {
        worst = worst.max(thm_upper_a_general(&sq, n).unwrap().margin.abs());
    }
    let took = start.elapsed();
    outcome(
        worst <= 1e-12 && took < Duration::from_secs(10),
        format!(
            "max |margin| {worst:.3e} over 1000 draws and n=3..50 (limit 1e-12), {}",
            secs(took)
        ),
    )
}

fn theorem_a_number() -> Outcome {
    let r = thm_a_lower(&power(2.0), 3).unwrap();
    // f(1/(3n)) + f(16/(81(n+3))) at n = 3, computed by hand
    let rhs = (1.0f64 / 9.0).powi(2) + (16.0f64 / 486.0).powi(2);
    let lhs = 1.0 / 72.0;
    let errs = [
        rel_err(r.lhs, lhs),
        rel_err(r.rhs, rhs),
        rel_err(r.margin, lhs - rhs),
    ];
    let worst = errs.iter().cloned().fold(0.0, f64::max);
    outcome(
        worst <= 1e-9 && (r.rhs - 0.0134295).abs() < 5e-8 && (r.margin - 4.59e-4).abs() < 5e-6,
        format!(
            "lhs={:.7} rhs={:.7} margin={:.3e}, max rel err {worst:.1e} (limit 1e-9)",
            r.lhs, r.rhs, r.margin
        ),
    )
}

fn upper_positive_number() -> Outcome {
    let r = thm_upper_a_positive(&power(2.0), 3).unwrap();
    let worst = [
        (r.rhs - 1.0 / 18.0).abs(),
        (r.lhs - 1.0 / 72.0).abs(),
        (r.margin - 1.0 / 24.0).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    outcome(
        worst <= 1e-12,
        format!(
            "lhs={} rhs={} margin={}, max abs err {worst:.1e} (limit 1e-12)",
            r.lhs, r.rhs, r.margin
        ),
    )
}

fn lower_bound_number() -> Outcome {
    let a = Sequence::new(vec![1.0, 2.0, 3.0]).unwrap();
    let r = thm1_lower(&power(2.0), &a, 2).unwrap();
    let worst = (r.lhs - 23.0 / 216.0).abs().max((r.rhs - 1.0 / 48.0).abs());
    outcome(
        worst <= 1e-12,
        format!(
            "lhs={} rhs={}, max abs err {worst:.1e} (limit 1e-12)",
            r.lhs, r.rhs
        ),
    )
}

const SWEEP_SEQUENCES: [&str; 6] = [
    "arith:1,1",
    "arith:2,0.5",
    "geom:1,1.5",
    "geom:0.5,2",
    "pow:2",
    "pow:1.5",
];

/// Every theorem over its flag-matched catalog functions, single-threaded.
fn hypothesis_respecting_sweep() -> Outcome {
    let start = Instant::now();
    let fns = catalog();
    let mut rows = 0;
    let mut violations = Vec::new();
    let mut unevaluable = 0;
    let mut worst = (f64::INFINITY, String::new());
    for theorem in TheoremId::ALL {
        let function_specs: Vec<String> = fns
            .iter()
            .filter(|f| theorem.required_classes().iter().all(|&c| f.has_class(c)))
            .map(|f| f.name().to_string())
            .collect();
        let spec = SweepSpec {
            theorem_ids: vec![theorem],
            function_specs,
            sequence_specs: SWEEP_SEQUENCES.iter().map(|s| s.parse().unwrap()).collect(),
            n_range: 2..=100,
            t_values: vec![0, 1, 2],
            parallel: false,
            ..SweepSpec::default()
        };
        let res = run_sweep(&spec).unwrap();
        rows += res.rows.len();
        unevaluable += res.errors.len();
        for row in &res.rows {
            let r = &row.report;
            if row.status == Status::PreconditionFailed {
                continue;
            }
            let rel = r.worst_margin() / r.scale();
            if rel < worst.0 {
                worst = (
                    rel,
                    format!(
                        "{} f={} seq={} n={}",
                        r.theorem,
                        r.function,
                        r.sequences.join("|"),
                        r.n
                    ),
                );
            }
            if row.status == Status::Violated {
                violations.push(format!(
                    "{}/{}/{}/n={}",
                    r.theorem,
                    r.function,
                    r.sequences.join("|"),
                    r.n
                ));
            }
        }
    }
    let took = start.elapsed();
    let mut detail = format!(
        "{rows} rows, {} violations, {unevaluable} unevaluable, min rel margin {:.3e} ({}), {}",
        violations.len(),
        worst.0,
        worst.1,
        secs(took)
    );
    if !violations.is_empty() {
        let mut by_theorem: Vec<String> = violations
            .iter()
            .map(|v| {
                let parts: Vec<&str> = v.split('/').collect();
                format!("{} {}", parts[0], parts[3])
            })
            .collect();
        by_theorem.sort();
        by_theorem.dedup();
        detail.push_str(&format!("; violated at: {}", by_theorem.join(", ")));
    }
    outcome(
        violations.is_empty() && took < Duration::from_secs(60),
        detail,
    )
}

fn certification_suite() -> Outcome {
    let mut failures = Vec::new();
    for m in [2.0, 2.5, 3.0, 4.0] {
        let c = certify(&power(m), FunctionClass::Superquadratic, DEFAULT_GRID).unwrap();
        if !c.passed {
            failures.push(format!("pow:{m} not superquadratic"));
        }
    }
    let c = certify(&power(1.5), FunctionClass::Superquadratic, DEFAULT_GRID).unwrap();
    if c.passed || c.witness.is_empty() {
        failures.push("pow:1.5 passed or has no witness".into());
    }
    let remark: Vec<FunctionModel> = catalog()
        .into_iter()
        .filter(|f| {
            f.has_class(FunctionClass::Subquadratic)
                && f.has_class(FunctionClass::Increasing)
                && !f.name().starts_with("pow:")
                && f.name() != "zero"
        })
        .collect();
    for f in &remark {
        for class in [FunctionClass::Subquadratic, FunctionClass::Increasing] {
            if !certify(f, class, DEFAULT_GRID).unwrap().passed {
                failures.push(format!("{} fails {}", f.name(), class.as_str()));
            }
        }
    }
    let shapes = check_monotone_convex_positive(&xlog(), DEFAULT_GRID).unwrap();
    if shapes.convex.passed || shapes.convex.witness.is_empty() {
        failures.push("xlog convexity not refuted".into());
    }
    let names: Vec<&str> = remark.iter().map(|f| f.name()).collect();
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "pow:1.5 witness {:?}; subquadratic+increasing: {}; xlog convex witness {:?}",
                c.witness,
                names.join(" "),
                shapes.convex.witness
            )
        } else {
            failures.join("; ")
        },
    )
}

fn monotone_averages() -> Outcome {
    let mut worst = (f64::INFINITY, String::new());
    let mut checked = Vec::new();
    for f in catalog()
        .into_iter()
        .filter(|f| f.has_class(FunctionClass::Convex))
    {
        // plain loops, independent of the library's summation
        let a =
            |n: usize| (1..n).map(|r| f.value(r as f64 / n as f64)).sum::<f64>() / (n - 1) as f64;
        let b =
            |n: usize| (0..=n).map(|r| f.value(r as f64 / n as f64)).sum::<f64>() / (n + 1) as f64;
        for n in 2..200 {
            for (slack, what) in [(a(n + 1) - a(n), "A"), (b(n) - b(n + 1), "B")] {
                if slack < worst.0 {
                    worst = (slack, format!("{} {what} n={n}", f.name()));
                }
            }
            let lib = avg_a(&f, n).unwrap().value;
            if rel_err(lib, a(n)) > 1e-12 {
                return outcome(
                    false,
                    format!("{} avg_a disagrees with the plain sum at n={n}", f.name()),
                );
            }
        }
        checked.push(f.name().to_string());
    }
    outcome(
        worst.0 >= -1e-12,
        format!(
            "min slack {:.3e} at {} over {}",
            worst.0,
            worst.1,
            checked.join(" ")
        ),
    )
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| -> (Vec<u8>, Option<i32>) {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_superquad"))
            .args([
                "verify",
                "--theorems",
                "T1,T2,A_lower,seq_upper_c",
                "--functions",
                "pow:2,pow:3,pnorm:2",
                "--sequences",
                "arith:1,1,geom:1,1.5,rand:cond=B,C",
                "--n",
                "2..40",
                "--t",
                "0,1,2",
                "--format",
                "csv",
                "--out",
            ])
            .arg(&path)
            .env_remove("SUPERQUAD_SEED")
            .output()
            .unwrap()
            .status;
        (std::fs::read(&path).unwrap(), status.code())
    };
    let (first, c1) = run("first.csv");
    let (second, c2) = run("second.csv");
    let lines = first.iter().filter(|&&b| b == b'\n').count();
    outcome(
        first == second && lines > 1 && c1 == c2,
        format!(
            "{} bytes, {lines} lines, identical: {}, exit codes {c1:?}/{c2:?}",
            first.len(),
            first == second
        ),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("exact-value averages", exact_averages),
        ("equality at x^2", equality_at_square),
        ("A lower bound at n=3", theorem_a_number),
        ("A upper bound (positive) at n=3", upper_positive_number),
        ("sequence lower bound at n=2", lower_bound_number),
        ("hypothesis-respecting sweep", hypothesis_respecting_sweep),
        ("certification suite", certification_suite),
        ("monotone averages", monotone_averages),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {} [{name}]: {} ({})",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
