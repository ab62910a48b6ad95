//! The averages `A_n`, `B_n`, the generalized average, and the difference
//! quantities that form the left-hand sides of the bounds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::FunctionModel;
use crate::sequences::Sequence;
use crate::summation::Summation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AverageKind {
    A,
    B,
    #[serde(rename = "generalized")]
    Generalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AverageValue {
    pub value: f64,
    pub n: usize,
    pub kind: AverageKind,
}

fn require_unit_interval(f: &FunctionModel) -> Result<()> {
    if f.domain_end() < 1.0 {
        return Err(Error::invalid(format!(
            "the averages sample [0, 1] but {} is defined on [0, {}]",
            f.name(),
            f.domain_end()
        )));
    }
    Ok(())
}

/// `A_n(f) = (1/(n−1)) Σ_{r=1}^{n−1} f(r/n)`.
pub fn avg_a(f: &FunctionModel, n: usize) -> Result<AverageValue> {
    avg_a_with(f, n, Summation::default())
}

pub fn avg_a_with(f: &FunctionModel, n: usize, sum: Summation) -> Result<AverageValue> {
    if n < 2 {
        return Err(Error::invalid(format!("A_n needs n ≥ 2, got {n}")));
    }
    require_unit_interval(f)?;
    let nf = n as f64;
    let s = sum.sum((1..n).map(|r| f.value(r as f64 / nf)));
    Ok(AverageValue {
        value: s / (nf - 1.0),
        n,
        kind: AverageKind::A,
    })
}

/// `B_n(f) = (1/(n+1)) Σ_{r=0}^{n} f(r/n)`, with `f(0)` taken from the model.
pub fn avg_b(f: &FunctionModel, n: usize) -> Result<AverageValue> {
    avg_b_with(f, n, Summation::default())
}

pub fn avg_b_with(f: &FunctionModel, n: usize, sum: Summation) -> Result<AverageValue> {
    if n < 1 {
        return Err(Error::invalid("B_n needs n ≥ 1"));
    }
    require_unit_interval(f)?;
    let nf = n as f64;
    let s = sum.sum((0..=n).map(|r| f.value(r as f64 / nf)));
    Ok(AverageValue {
        value: s / (nf + 1.0),
        n,
        kind: AverageKind::B,
    })
}

/// `Σ_{i=1}^{n} f(a_i/denom)` with a domain check naming the offending index.
pub(crate) fn ratio_sum(
    f: &FunctionModel,
    a: &Sequence,
    n: usize,
    denom: f64,
    sum: Summation,
) -> Result<f64> {
    a.require("a", n)?;
    let args = (1..=n)
        .map(|i| f.check_arg(&format!("a_{i}/{denom}"), a[i] / denom))
        .collect::<Result<Vec<f64>>>()?;
    Ok(sum.sum(args.into_iter().map(|x| f.value(x))))
}

/// `(1/weight) Σ_{i=1}^{n} f(a_i/denom)`.
pub fn avg_general(
    f: &FunctionModel,
    a: &Sequence,
    denom: f64,
    weight: f64,
    n: usize,
) -> Result<AverageValue> {
    avg_general_with(f, a, denom, weight, n, Summation::default())
}

pub fn avg_general_with(
    f: &FunctionModel,
    a: &Sequence,
    denom: f64,
    weight: f64,
    n: usize,
    sum: Summation,
) -> Result<AverageValue> {
    if !(weight.is_finite() && weight > 0.0) {
        return Err(Error::invalid(format!(
            "weight must be positive, got {weight}"
        )));
    }
    if !(denom.is_finite() && denom > 0.0) {
        return Err(Error::invalid(format!(
            "denominator must be positive, got {denom}"
        )));
    }
    Ok(AverageValue {
        value: ratio_sum(f, a, n, denom, sum)? / weight,
        n,
        kind: AverageKind::Generalized,
    })
}

fn general(
    f: &FunctionModel,
    a: &Sequence,
    denom: f64,
    weight: f64,
    n: usize,
    sum: Summation,
) -> Result<f64> {
    Ok(avg_general_with(f, a, denom, weight, n, sum)?.value)
}

/// `Δ = (1/n)Σ_{i≤n} f(a_i/a_n) − (1/(n+1))Σ_{i≤n+1} f(a_i/a_{n+1})`.
pub fn diff_delta(f: &FunctionModel, a: &Sequence, n: usize) -> Result<f64> {
    diff_delta_with(f, a, n, Summation::default())
}

pub fn diff_delta_with(f: &FunctionModel, a: &Sequence, n: usize, sum: Summation) -> Result<f64> {
    check_n(n)?;
    a.require("a", n + 1)?;
    let nf = n as f64;
    Ok(general(f, a, a[n], nf, n, sum)? - general(f, a, a[n + 1], nf + 1.0, n + 1, sum)?)
}

/// `D = (1/c_n)Σ_{r≤n} f(a_r/a_n) − (1/c_{n+1})Σ_{r≤n+1} f(a_r/a_{n+1})`.
pub fn diff_d(f: &FunctionModel, a: &Sequence, c: &Sequence, n: usize) -> Result<f64> {
    diff_d_with(f, a, c, n, Summation::default())
}

pub fn diff_d_with(
    f: &FunctionModel,
    a: &Sequence,
    c: &Sequence,
    n: usize,
    sum: Summation,
) -> Result<f64> {
    check_n(n)?;
    a.require("a", n + 1)?;
    c.require("c", n + 1)?;
    Ok(general(f, a, a[n], c[n], n, sum)? - general(f, a, a[n + 1], c[n + 1], n + 1, sum)?)
}

/// `H`: as `D` with `b_n`, `b_{n+1}` as denominators.
pub fn diff_h(
    f: &FunctionModel,
    a: &Sequence,
    b: &Sequence,
    c: &Sequence,
    n: usize,
) -> Result<f64> {
    diff_h_with(f, a, b, c, n, Summation::default())
}

pub fn diff_h_with(
    f: &FunctionModel,
    a: &Sequence,
    b: &Sequence,
    c: &Sequence,
    n: usize,
    sum: Summation,
) -> Result<f64> {
    check_n(n)?;
    a.require("a", n + 1)?;
    b.require("b", n + 1)?;
    c.require("c", n + 1)?;
    Ok(general(f, a, b[n], c[n], n, sum)? - general(f, a, b[n + 1], c[n + 1], n + 1, sum)?)
}

/// `E = (1/(n+1))Σ_{i≤n+1} f(a_i/a_{n+1}) − (1/n)Σ_{i≤n} f(a_i/a_n)`, the
/// negative of `Δ`.
pub fn diff_e(f: &FunctionModel, a: &Sequence, n: usize) -> Result<f64> {
    diff_e_with(f, a, n, Summation::default())
}

pub fn diff_e_with(f: &FunctionModel, a: &Sequence, n: usize, sum: Summation) -> Result<f64> {
    check_n(n)?;
    a.require("a", n + 1)?;
    let nf = n as f64;
    Ok(general(f, a, a[n + 1], nf + 1.0, n + 1, sum)? - general(f, a, a[n], nf, n, sum)?)
}

/// `R = (1/a_{n+1})Σ_{i≤n+1} f(a_i/a_{n+1}) − (1/a_n)Σ_{i≤n} f(a_i/a_n)`.
pub fn diff_r(f: &FunctionModel, a: &Sequence, n: usize) -> Result<f64> {
    diff_r_with(f, a, n, Summation::default())
}

pub fn diff_r_with(f: &FunctionModel, a: &Sequence, n: usize, sum: Summation) -> Result<f64> {
    check_n(n)?;
    a.require("a", n + 1)?;
    Ok(general(f, a, a[n + 1], a[n + 1], n + 1, sum)? - general(f, a, a[n], a[n], n, sum)?)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("difference quantities need n ≥ 1"));
    }
    Ok(())
}
