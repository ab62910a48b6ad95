//! Numerical verification of refinements of inequalities between averages
//! of superquadratic and subquadratic functions.
//!
//! The crate evaluates the averages `A_n(f)`, `B_n(f)` and their
//! generalisations, the refinement chains built from the superquadratic
//! inequality, and both sides of each bound, reporting signed margins.
//! The [`harness`] module sweeps and searches over those evaluators.

pub mod averages;
pub mod bounds;
pub mod error;
pub mod functions;
pub mod harness;
pub mod refinements;
pub mod sequences;
pub mod summation;

pub use averages::{avg_a, avg_b, avg_general, AverageKind, AverageValue};
pub use bounds::{evaluate, BoundReport, Orientation, TheoremId, TheoremParams};
pub use error::{Error, Result};
pub use functions::{
    catalog, certify, check_monotone_convex_positive, check_subquadratic, check_superquadratic,
    support_constant, Certificate, ClassFlags, FunctionClass, FunctionModel, SupportConstantPolicy,
};
pub use harness::{
    emit_report, minimize_margin, run_sweep, ReportFormat, SearchResult, SweepResult, SweepSpec,
};
pub use refinements::{
    jensen_refinement, lemma1_chain, lemma2_bound, lemma3_bound, ChainEvaluation,
};
pub use sequences::{ConditionReport, Sequence, SequenceSpec};
pub use summation::Summation;
