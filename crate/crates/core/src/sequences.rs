//! Positive 1-indexed sequences, their generators, and validators for every
//! sequence condition the bounds impose.

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance of the validators, scaled by the magnitude of the compared terms.
pub const COND_TOL: f64 = 1e-12;
/// Attempts allowed to the rejection sampler of random monotone sequences.
pub const RETRY_CAP: usize = 10_000;

static ZERO: f64 = 0.0;

/// A finite positive sequence indexed from 1, optionally carrying the
/// convention `s_0 = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sequence {
    values: Vec<f64>,
    zeroth: bool,
}

impl Sequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::invalid(format!(
                "sequence term {} = {v} is not strictly positive",
                i + 1
            )));
        }
        Ok(Sequence {
            values,
            zeroth: false,
        })
    }

    /// Adds the `s_0 = 0` slot.
    pub fn with_zeroth(mut self) -> Self {
        self.zeroth = true;
        self
    }

    pub fn has_zeroth(&self) -> bool {
        self.zeroth
    }

    /// Number of terms at indices `1..`.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The first `len` terms, keeping the zeroth convention.
    pub fn truncated(&self, len: usize) -> Result<Sequence> {
        self.require("sequence", len)?;
        Ok(Sequence {
            values: self.values[..len].to_vec(),
            zeroth: self.zeroth,
        })
    }

    pub fn scaled(&self, factor: f64) -> Result<Sequence> {
        let mut s = Sequence::new(self.values.iter().map(|v| v * factor).collect())?;
        s.zeroth = self.zeroth;
        Ok(s)
    }

    pub(crate) fn require(&self, name: &str, needed: usize) -> Result<()> {
        if self.len() < needed {
            return Err(Error::Length {
                name: name.to_string(),
                needed,
                len: self.len(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for Sequence {
    type Output = f64;

    /// 1-based access. Index 0 is only valid with the zeroth convention.
    fn index(&self, i: usize) -> &f64 {
        if i == 0 {
            assert!(self.zeroth, "index 0 requires the s_0 = 0 convention");
            &ZERO
        } else {
            &self.values[i - 1]
        }
    }
}

/// Result of checking one sequence condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition_name: String,
    pub holds: bool,
    /// Smallest slack over all instances; `+inf` when the condition is vacuous.
    pub worst_slack: f64,
    /// 1-based index of the instance with the worst slack.
    pub witness_index: Option<usize>,
    pub tol_abs: f64,
}

impl ConditionReport {
    /// Builds a report from `(index, slack)` pairs. `scale` is the magnitude
    /// of the compared quantities and sets the absolute tolerance.
    pub(crate) fn from_slacks<I>(name: &str, slacks: I, scale: f64) -> Self
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut worst = f64::INFINITY;
        let mut witness = None;
        for (i, s) in slacks {
            let s = if s.is_nan() { f64::NEG_INFINITY } else { s };
            if s < worst {
                worst = s;
                witness = Some(i);
            }
        }
        let tol_abs = COND_TOL * scale.max(1.0);
        ConditionReport {
            condition_name: name.to_string(),
            holds: worst >= -tol_abs,
            worst_slack: worst,
            witness_index: witness,
            tol_abs,
        }
    }
}

fn max_abs(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `s_{i+1} ≥ s_i` for every consecutive pair.
pub fn is_increasing(s: &Sequence) -> Result<ConditionReport> {
    s.require("s", 2)?;
    let slacks = (1..s.len()).map(|i| (i, s[i + 1] - s[i]));
    Ok(ConditionReport::from_slacks(
        "increasing",
        slacks,
        max_abs(s.values().iter().copied()),
    ))
}

/// The increments `s_i − s_{i−1}` are non-decreasing, starting from
/// `s_1 − s_0 = s_1` when the zeroth convention is present.
pub fn increments_increasing(s: &Sequence) -> Result<ConditionReport> {
    let first = if s.has_zeroth() { 1 } else { 2 };
    if !s.has_zeroth() {
        s.require("s", 3)?;
    }
    let incr = |i: usize| s[i] - s[i - 1];
    let slacks = (first..s.len()).map(|i| (i, incr(i + 1) - incr(i)));
    Ok(ConditionReport::from_slacks(
        "increments_increasing",
        slacks,
        max_abs(s.values().iter().copied()),
    ))
}

/// `c_1(1 − a_1/a_2) ≤ c_{i−1}(1 − a_{i−1}/a_i) ≤ c_n(1 − a_n/a_{n+1})` for
/// `i = 2..n`. The `i = 1` instance involves `a_0 = c_0 = 0` and is vacuous.
pub fn cond_iii(a: &Sequence, c: &Sequence, n: usize) -> Result<ConditionReport> {
    a.require("a", n + 1)?;
    c.require("c", n + 1)?;
    let term = |i: usize| c[i] * (1.0 - a[i] / a[i + 1]);
    let lo = term(1);
    let hi = term(n);
    let mids: Vec<(usize, f64)> = (2..=n).map(|i| (i, term(i - 1))).collect();
    let scale = max_abs(mids.iter().map(|m| m.1).chain([lo, hi]));
    let slacks = mids.iter().flat_map(|&(i, m)| [(i, m - lo), (i, hi - m)]);
    Ok(ConditionReport::from_slacks("III", slacks, scale))
}

/// Condition (B): `i(a_{i+1}/a_i − 1) ≤ n(a_{n+1}/a_n − 1)` for `i = 1..n`.
pub fn cond_b(a: &Sequence, n: usize) -> Result<ConditionReport> {
    if n == 0 {
        return Err(Error::invalid("condition B needs n ≥ 1"));
    }
    a.require("a", n + 1)?;
    let term = |i: usize| i as f64 * (a[i + 1] / a[i] - 1.0);
    let rhs = term(n);
    let terms: Vec<f64> = (1..=n).map(term).collect();
    let scale = max_abs(terms.iter().copied());
    Ok(ConditionReport::from_slacks(
        "B",
        terms.iter().enumerate().map(|(k, t)| (k + 1, rhs - t)),
        scale,
    ))
}

/// `a_{i+1}/a_i ≤ 2` for every consecutive pair.
pub fn cond_ratio_le_2(a: &Sequence) -> Result<ConditionReport> {
    a.require("a", 2)?;
    let ratios: Vec<f64> = (1..a.len()).map(|i| a[i + 1] / a[i]).collect();
    let scale = max_abs(ratios.iter().copied());
    Ok(ConditionReport::from_slacks(
        "ratio_le_2",
        ratios.iter().enumerate().map(|(k, r)| (k + 1, 2.0 - r)),
        scale,
    ))
}

/// Three-sequence condition (c): `c_n(1 − b_n/b_{n+1}) ≥ c_r(1 − a_r/a_{r+1})`
/// for `r = 1..n`.
pub fn cond_c_three_seq(
    a: &Sequence,
    b: &Sequence,
    c: &Sequence,
    n: usize,
) -> Result<ConditionReport> {
    a.require("a", n + 1)?;
    b.require("b", n + 1)?;
    c.require("c", n + 1)?;
    let lhs = c[n] * (1.0 - b[n] / b[n + 1]);
    let rhs: Vec<f64> = (1..=n).map(|r| c[r] * (1.0 - a[r] / a[r + 1])).collect();
    let scale = max_abs(rhs.iter().copied().chain([lhs]));
    Ok(ConditionReport::from_slacks(
        "three_seq_c",
        rhs.iter().enumerate().map(|(k, t)| (k + 1, lhs - t)),
        scale,
    ))
}

/// `i(1 − a_i/a_{i+1})` is non-decreasing over `i = 1..n`.
pub fn cond_t1(a: &Sequence, n: usize) -> Result<ConditionReport> {
    a.require("a", n + 1)?;
    let terms: Vec<f64> = (1..=n)
        .map(|i| i as f64 * (1.0 - a[i] / a[i + 1]))
        .collect();
    let scale = max_abs(terms.iter().copied());
    Ok(ConditionReport::from_slacks(
        "T1",
        terms
            .windows(2)
            .enumerate()
            .map(|(k, w)| (k + 1, w[1] - w[0])),
        scale,
    ))
}

/// Conditions a random monotone sequence can be asked to satisfy. Index-
/// dependent conditions use `n = len − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqCondition {
    Increasing,
    IncrementsIncreasing,
    B,
    C,
    T1,
}

impl SeqCondition {
    pub fn as_str(self) -> &'static str {
        match self {
            SeqCondition::Increasing => "inc",
            SeqCondition::IncrementsIncreasing => "II",
            SeqCondition::B => "B",
            SeqCondition::C => "C",
            SeqCondition::T1 => "T1",
        }
    }

    pub fn check(self, s: &Sequence) -> Result<ConditionReport> {
        let n = s.len().saturating_sub(1);
        match self {
            SeqCondition::Increasing => is_increasing(s),
            SeqCondition::IncrementsIncreasing => increments_increasing(&s.clone().with_zeroth()),
            SeqCondition::B => cond_b(s, n),
            SeqCondition::C => cond_ratio_le_2(s),
            SeqCondition::T1 => cond_t1(s, n),
        }
    }
}

impl FromStr for SeqCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "inc" => SeqCondition::Increasing,
            "II" => SeqCondition::IncrementsIncreasing,
            "B" => SeqCondition::B,
            "C" => SeqCondition::C,
            "T1" => SeqCondition::T1,
            other => {
                return Err(Error::Unknown {
                    kind: "sequence condition",
                    spec: other.to_string(),
                })
            }
        })
    }
}

/// A sequence family with its parameters, e.g. `arith:1,1` or
/// `rand:seed=7;cond=B,C`.
#[derive(Debug, Clone, PartialEq)]
pub enum SequenceSpec {
    Arithmetic {
        start: f64,
        step: f64,
    },
    Geometric {
        start: f64,
        ratio: f64,
    },
    /// `a_i = i^exponent`.
    Power {
        exponent: f64,
    },
    /// Increasing sequence drawn by rejection sampling against `conditions`.
    RandomMonotone {
        seed: Option<u64>,
        conditions: Vec<SeqCondition>,
    },
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Arithmetic { start, step } => write!(f, "arith:{start},{step}"),
            SequenceSpec::Geometric { start, ratio } => write!(f, "geom:{start},{ratio}"),
            SequenceSpec::Power { exponent } => write!(f, "pow:{exponent}"),
            SequenceSpec::RandomMonotone { seed, conditions } => {
                f.write_str("rand:")?;
                let mut fields = Vec::new();
                if let Some(seed) = seed {
                    fields.push(format!("seed={seed}"));
                }
                if !conditions.is_empty() {
                    let names: Vec<&str> = conditions.iter().map(|c| c.as_str()).collect();
                    fields.push(format!("cond={}", names.join(",")));
                }
                f.write_str(&fields.join(";"))
            }
        }
    }
}

impl FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (kind, args) = spec
            .split_once(':')
            .ok_or_else(|| Error::parse("sequence", spec, "expected `family:params`"))?;
        let numbers = |expected: usize| -> Result<Vec<f64>> {
            let vals: Vec<f64> = args
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::parse("sequence", spec, e.to_string()))?;
            if vals.len() != expected || vals.iter().any(|v| !v.is_finite()) {
                return Err(Error::parse(
                    "sequence",
                    spec,
                    format!("expected {expected} finite number(s)"),
                ));
            }
            Ok(vals)
        };
        match kind {
            "arith" => {
                let v = numbers(2)?;
                Ok(SequenceSpec::Arithmetic {
                    start: v[0],
                    step: v[1],
                })
            }
            "geom" => {
                let v = numbers(2)?;
                Ok(SequenceSpec::Geometric {
                    start: v[0],
                    ratio: v[1],
                })
            }
            "pow" => Ok(SequenceSpec::Power {
                exponent: numbers(1)?[0],
            }),
            "rand" => {
                let mut seed = None;
                let mut conditions = Vec::new();
                for field in args.split(';').map(str::trim).filter(|f| !f.is_empty()) {
                    let (key, value) = field.split_once('=').ok_or_else(|| {
                        Error::parse("sequence", spec, format!("`{field}` is not key=value"))
                    })?;
                    match key.trim() {
                        "seed" => {
                            seed = Some(value.trim().parse().map_err(|_| {
                                Error::parse("sequence", spec, "seed must be an integer")
                            })?)
                        }
                        "cond" => {
                            for c in value.split(',').filter(|c| !c.trim().is_empty()) {
                                conditions.push(c.parse()?);
                            }
                        }
                        other => {
                            return Err(Error::parse(
                                "sequence",
                                spec,
                                format!("unknown key `{other}`"),
                            ))
                        }
                    }
                }
                Ok(SequenceSpec::RandomMonotone { seed, conditions })
            }
            _ => Err(Error::Unknown {
                kind: "sequence family",
                spec: spec.to_string(),
            }),
        }
    }
}

impl SequenceSpec {
    /// Family name as used in spec strings.
    pub fn family(&self) -> &'static str {
        match self {
            SequenceSpec::Arithmetic { .. } => "arith",
            SequenceSpec::Geometric { .. } => "geom",
            SequenceSpec::Power { .. } => "pow",
            SequenceSpec::RandomMonotone { .. } => "rand",
        }
    }

    /// Generates `length` terms. Random families without an explicit seed
    /// use `fallback_seed`.
    pub fn generate_seeded(&self, length: usize, fallback_seed: u64) -> Result<Sequence> {
        match *self {
            SequenceSpec::Arithmetic { start, step } => {
                Sequence::new((0..length).map(|k| start + step * k as f64).collect())
            }
            SequenceSpec::Geometric { start, ratio } => {
                if ratio.is_nan() || ratio <= 0.0 {
                    return Err(Error::invalid(format!(
                        "geometric ratio must be positive, got {ratio}"
                    )));
                }
                Sequence::new((0..length).map(|k| start * ratio.powi(k as i32)).collect())
            }
            SequenceSpec::Power { exponent } => {
                Sequence::new((1..=length).map(|i| (i as f64).powf(exponent)).collect())
            }
            SequenceSpec::RandomMonotone {
                seed,
                ref conditions,
            } => random_monotone(seed.unwrap_or(fallback_seed), conditions, length),
        }
    }
}

/// Default seed for random sequence families.
pub const DEFAULT_SEQUENCE_SEED: u64 = 7;

/// Generates `length` terms of `spec`.
pub fn generate(spec: &SequenceSpec, length: usize) -> Result<Sequence> {
    spec.generate_seeded(length, DEFAULT_SEQUENCE_SEED)
}

fn random_monotone(seed: u64, conditions: &[SeqCondition], length: usize) -> Result<Sequence> {
    if length < 2 {
        return Err(Error::invalid(
            "random monotone sequences need at least 2 terms",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = length - 1;
    for attempt in 0..RETRY_CAP {
        let mut values = Vec::with_capacity(length);
        values.push(rng.random_range(0.5..2.0));
        match attempt % 4 {
            // free increments, optionally sorted so they are non-decreasing
            shape @ (0 | 1) => {
                let mut incs: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
                if shape == 1 {
                    incs.sort_by(f64::total_cmp);
                }
                for d in incs {
                    values.push(values.last().unwrap() + d);
                }
            }
            // multiplicative growth a_{i+1} = a_i (1 + g_i / i) with g_n the
            // largest rate, optionally sorted
            shape => {
                let top: f64 = rng.random_range(0.05..1.0);
                let mut rates: Vec<f64> = (0..n - 1).map(|_| rng.random_range(0.01..top)).collect();
                if shape == 3 {
                    rates.sort_by(f64::total_cmp);
                }
                rates.push(top);
                for (i, g) in rates.into_iter().enumerate() {
                    values.push(values.last().unwrap() * (1.0 + g / (i + 1) as f64));
                }
            }
        }
        let candidate = Sequence::new(values)?;
        let mut ok = is_increasing(&candidate)?.holds;
        for c in conditions {
            if !ok {
                break;
            }
            ok = c.check(&candidate)?.holds;
        }
        if ok {
            return Ok(candidate);
        }
    }
    let names: Vec<&str> = conditions.iter().map(|c| c.as_str()).collect();
    Err(Error::RejectionExhausted {
        conditions: format!("[{}]", names.join(",")),
        attempts: RETRY_CAP,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[f64]) -> Sequence {
        Sequence::new(v.to_vec()).unwrap()
    }

    fn naturals(len: usize) -> Sequence {
        Sequence::new((1..=len).map(|i| i as f64).collect()).unwrap()
    }

    fn geometric(ratio: f64, len: usize) -> Sequence {
        generate(&SequenceSpec::Geometric { start: 1.0, ratio }, len).unwrap()
    }

    #[test]
    fn construction() {
        assert!(Sequence::new(vec![1.0, 0.0]).is_err());
        assert!(Sequence::new(vec![1.0, f64::NAN]).is_err());
        let s = seq(&[2.0, 3.0]).with_zeroth();
        assert_eq!(s[0], 0.0);
        assert_eq!(s[1], 2.0);
        assert_eq!(s.len(), 2);
        assert!(s.truncated(3).is_err());
    }

    #[test]
    #[should_panic]
    fn index_zero_without_convention_panics() {
        let _ = seq(&[1.0])[0];
    }

    #[test]
    fn increasing_examples() {
        let r = is_increasing(&seq(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert!(r.holds);
        assert_eq!(r.worst_slack, 1.0);
        assert!(is_increasing(&seq(&[1.0, 4.0, 9.0, 16.0])).unwrap().holds);
        let r = is_increasing(&seq(&[1.0, 3.0, 2.0])).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness_index, Some(2));
        assert!(matches!(
            is_increasing(&seq(&[1.0])),
            Err(Error::Length { .. })
        ));
    }

    #[test]
    fn increments_examples() {
        assert!(
            increments_increasing(&seq(&[1.0, 2.0, 4.0, 8.0]).with_zeroth())
                .unwrap()
                .holds
        );
        let r = increments_increasing(&naturals(6).with_zeroth()).unwrap();
        assert!(r.holds);
        assert_eq!(r.worst_slack, 0.0);
        let r = increments_increasing(&seq(&[1.0, 3.0, 4.0]).with_zeroth()).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness_index, Some(2));
        assert!(increments_increasing(&seq(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn cond_iii_examples() {
        let a = naturals(5);
        let r = cond_iii(&a, &a, 4).unwrap();
        assert!(r.holds);
        // lower chain touches at i = 2; right end 4/5 against 3/4
        assert_eq!(r.worst_slack, 0.0);

        // a doubling, c = 1..5: middle terms c_{i-1}/2 = 1/2, 1, 3/2; right end 2.
        let a = seq(&[1.0, 2.0, 4.0, 8.0, 16.0]);
        let r = cond_iii(&a, &naturals(5), 4).unwrap();
        assert!(r.holds);
        assert!((r.worst_slack - 0.0).abs() < 1e-15);

        // a = c geometric ratio 2, n = 3: middle terms c_{i-1}/2 = 1/2, 1; right end c_3/2 = 2.
        let g = geometric(2.0, 4);
        let r = cond_iii(&g, &g, 3).unwrap();
        assert!(r.holds);
        assert_eq!(r.worst_slack, 0.0);

        // a middle term above the right end fails
        let a = seq(&[1.0, 2.0, 10.0, 11.0]);
        let c = naturals(4);
        let r = cond_iii(&a, &c, 3).unwrap();
        // middle i = 3: c_2 (1 - 2/10) = 1.6; right end c_3 (1 - 10/11) = 3/11
        assert!(!r.holds);
        assert_eq!(r.witness_index, Some(3));
        assert!((r.worst_slack - (3.0 / 11.0 - 1.6)).abs() < 1e-14);
    }

    #[test]
    fn cond_b_examples() {
        for n in 1..10 {
            let r = cond_b(&naturals(n + 1), n).unwrap();
            assert!(r.holds);
            assert!(r.worst_slack.abs() < 1e-15);
        }
        // squares, n = 3: terms (2i+1)/i = 3, 2.5, 7/3 → RHS 7/3 is the smallest term
        let sq = seq(&[1.0, 4.0, 9.0, 16.0]);
        let r = cond_b(&sq, 3).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness_index, Some(1));
        assert!((r.worst_slack - (7.0 / 3.0 - 3.0)).abs() < 1e-14);
        let r = cond_b(&geometric(1.7, 8), 7).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn ratio_examples() {
        let r = cond_ratio_le_2(&naturals(6)).unwrap();
        assert!(r.holds);
        assert_eq!(r.worst_slack, 0.0);
        assert_eq!(r.witness_index, Some(1));
        assert!(!cond_ratio_le_2(&geometric(3.0, 5)).unwrap().holds);
        assert!(cond_ratio_le_2(&geometric(1.5, 5)).unwrap().holds);
    }

    #[test]
    fn three_seq_examples() {
        // a = b = c = 1..4, n = 3: LHS 3/4 against r/(r+1)
        let s = naturals(4);
        let r = cond_c_three_seq(&s, &s, &s, 3).unwrap();
        assert!(r.holds);
        assert_eq!(r.worst_slack, 0.0);

        // b = squares grows faster: LHS 3 (1 - 9/16) = 21/16
        let b = seq(&[1.0, 4.0, 9.0, 16.0]);
        let r = cond_c_three_seq(&s, &b, &s, 3).unwrap();
        assert!(r.holds);
        assert!((r.worst_slack - (21.0 / 16.0 - 0.75)).abs() < 1e-14);

        // b with ratio 1.1 while a has ratio 2 at the start
        let b = geometric(1.1, 4);
        let r = cond_c_three_seq(&s, &b, &s, 3).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn t1_examples() {
        assert!(cond_t1(&naturals(8), 7).unwrap().holds);
        let r = cond_t1(&geometric(2.0, 8), 7).unwrap();
        assert!(r.holds);
        assert!((r.worst_slack - 0.5).abs() < 1e-15);
        let r = cond_t1(&seq(&[1.0, 10.0, 11.0, 12.0]), 3).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness_index, Some(1));
        assert!((r.worst_slack - (2.0 / 11.0 - 0.9)).abs() < 1e-14);
    }

    #[test]
    fn natural_numbers_satisfy_everything() {
        let a = naturals(12);
        let n = 11;
        assert!(is_increasing(&a).unwrap().holds);
        assert!(
            increments_increasing(&a.clone().with_zeroth())
                .unwrap()
                .holds
        );
        let b = cond_b(&a, n).unwrap();
        assert!(b.holds && b.worst_slack.abs() < 1e-13);
        let r = cond_ratio_le_2(&a).unwrap();
        assert!(r.holds && r.worst_slack == 0.0);
        assert!(cond_t1(&a, n).unwrap().holds);
        assert!(cond_iii(&a, &a, n).unwrap().holds);
    }

    #[test]
    fn generator_examples() {
        let s = generate(&"arith:1,1".parse().unwrap(), 5).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0, 4.0, 5.0]);
        let s = generate(&"geom:1,1.5".parse().unwrap(), 4).unwrap();
        assert_eq!(s.values(), &[1.0, 1.5, 2.25, 3.375]);
        let s = generate(&"pow:2".parse().unwrap(), 4).unwrap();
        assert_eq!(s.values(), &[1.0, 4.0, 9.0, 16.0]);
        assert!(generate(&"arith:1,-1".parse().unwrap(), 3).is_err());
    }

    #[test]
    fn random_sequences_are_deterministic_and_valid() {
        let spec: SequenceSpec = "rand:seed=7;cond=B,C".parse().unwrap();
        let a = generate(&spec, 12).unwrap();
        let b = generate(&spec, 12).unwrap();
        assert_eq!(a, b);
        assert!(is_increasing(&a).unwrap().holds);
        assert!(cond_b(&a, 11).unwrap().holds);
        assert!(cond_ratio_le_2(&a).unwrap().holds);
        let other = generate(&"rand:seed=8;cond=B,C".parse().unwrap(), 12).unwrap();
        assert_ne!(a, other);

        let t1 = generate(&"rand:seed=3;cond=T1,II".parse().unwrap(), 10).unwrap();
        assert!(cond_t1(&t1, 9).unwrap().holds);
        assert!(
            increments_increasing(&t1.clone().with_zeroth())
                .unwrap()
                .holds
        );
    }

    #[test]
    fn rejection_cap_is_reported() {
        // increments non-decreasing from a_0 = 0 together with T1 and B over
        // 60 terms is out of reach of the sampler
        let spec: SequenceSpec = "rand:seed=1;cond=II,B,T1".parse().unwrap();
        match generate(&spec, 60) {
            Err(Error::RejectionExhausted { attempts, .. }) => assert_eq!(attempts, RETRY_CAP),
            Ok(s) => {
                // a lucky draw is still a valid one
                assert!(cond_b(&s, 59).unwrap().holds);
                assert!(cond_t1(&s, 59).unwrap().holds);
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "arith:1,1",
            "geom:1,1.5",
            "pow:2",
            "rand:seed=7;cond=B,C",
            "rand:cond=T1",
        ] {
            let spec: SequenceSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("foo:1".parse::<SequenceSpec>().is_err());
        assert!("arith:1".parse::<SequenceSpec>().is_err());
        assert!("rand:cond=Z".parse::<SequenceSpec>().is_err());
    }

    fn positive_increasing() -> impl Strategy<Value = Vec<f64>> {
        (0.1f64..5.0, prop::collection::vec(0.01f64..3.0, 3..12)).prop_map(|(start, incs)| {
            let mut v = vec![start];
            for d in incs {
                v.push(v.last().unwrap() + d);
            }
            v
        })
    }

    proptest! {
        #[test]
        fn ratio_conditions_are_scale_invariant(
            a in positive_increasing(),
            c in positive_increasing(),
            kappa in prop::sample::select(vec![0.5, 3.0]),
        ) {
            let len = a.len().min(c.len());
            let a = seq(&a[..len]);
            let c = seq(&c[..len]);
            let n = len - 1;
            let ka = a.scaled(kappa).unwrap();
            let kc = c.scaled(kappa).unwrap();
            prop_assert_eq!(cond_b(&a, n).unwrap().holds, cond_b(&ka, n).unwrap().holds);
            prop_assert_eq!(cond_ratio_le_2(&a).unwrap().holds, cond_ratio_le_2(&ka).unwrap().holds);
            prop_assert_eq!(cond_t1(&a, n).unwrap().holds, cond_t1(&ka, n).unwrap().holds);
            prop_assert_eq!(cond_iii(&a, &c, n).unwrap().holds, cond_iii(&ka, &kc, n).unwrap().holds);
            prop_assert_eq!(
                cond_c_three_seq(&a, &c, &c, n).unwrap().holds,
                cond_c_three_seq(&ka, &kc, &kc, n).unwrap().holds
            );
            let inc = is_increasing(&a).unwrap();
            let kinc = is_increasing(&ka).unwrap();
            prop_assert_eq!(inc.holds, kinc.holds);
            prop_assert!((kinc.worst_slack - kappa * inc.worst_slack).abs() <= 1e-12 * kinc.worst_slack.abs().max(1.0));
            let ii = increments_increasing(&a.clone().with_zeroth()).unwrap();
            let kii = increments_increasing(&ka.clone().with_zeroth()).unwrap();
            prop_assert_eq!(ii.holds, kii.holds);
            prop_assert!((kii.worst_slack - kappa * ii.worst_slack).abs() <= 1e-12 * kii.worst_slack.abs().max(1.0));
        }

        #[test]
        fn geometric_ratio_up_to_two_satisfies_b_and_c(r in 1.0001f64..=2.0, len in 3usize..40) {
            let g = geometric(r, len);
            let b = cond_b(&g, len - 1).unwrap();
            prop_assert!(b.holds);
            prop_assert!(b.worst_slack.abs() <= 1e-12);
            prop_assert!(cond_ratio_le_2(&g).unwrap().holds);
        }
    }
}
