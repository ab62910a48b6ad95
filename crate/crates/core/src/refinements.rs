//! Both sides of the refinement lemmas, returned as chains of named levels so
//! every inequality in a chain can be asserted and its slack inspected.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::functions::{FunctionClass, FunctionModel};
use crate::sequences::ConditionReport;
use crate::summation::Summation;

/// Largest number of refinement steps evaluated. `|1−2λ|^t` has long since
/// underflowed for any `λ` that is not exactly 0 or 1.
pub const MAX_T: usize = 64;
/// Arguments smaller than this are flushed to an exact zero.
pub const TINY_ARG: f64 = 1e-300;
const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Direction in which a chain's levels are expected to move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainOrientation {
    /// `levels[0] ≥ levels[1] ≥ ...`
    Decreasing,
    /// `levels[0] ≤ levels[1] ≤ ...`
    Increasing,
}

/// The rungs of an inequality chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainEvaluation {
    pub levels: Vec<(String, f64)>,
    /// Consecutive gaps, signed so that a non-negative margin means the link
    /// holds in the stated orientation.
    pub margins: Vec<f64>,
    pub params: Vec<(String, Vec<f64>)>,
    pub orientation: ChainOrientation,
    /// Side condition of the lemma, when it has one.
    pub condition: Option<ConditionReport>,
}

impl ChainEvaluation {
    fn new(
        levels: Vec<(String, f64)>,
        params: Vec<(String, Vec<f64>)>,
        orientation: ChainOrientation,
    ) -> Self {
        let margins = levels
            .windows(2)
            .map(|w| match orientation {
                ChainOrientation::Decreasing => w[0].1 - w[1].1,
                ChainOrientation::Increasing => w[1].1 - w[0].1,
            })
            .collect();
        ChainEvaluation {
            levels,
            margins,
            params,
            orientation,
            condition: None,
        }
    }

    pub fn level(&self, name: &str) -> Option<f64> {
        self.levels.iter().find(|(n, _)| n == name).map(|l| l.1)
    }

    pub fn values(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.1).collect()
    }

    /// `max(1, |levels[0]|)`, the scale of relative tolerances.
    pub fn scale(&self) -> f64 {
        self.levels.first().map_or(1.0, |l| l.1.abs().max(1.0))
    }

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `f` at a computed argument: flushes denormal-range arguments to zero and
/// checks the domain.
fn f_at(f: &FunctionModel, what: &str, x: f64) -> Result<f64> {
    let x = if x.abs() < TINY_ARG { 0.0 } else { x };
    Ok(f.value(f.check_arg(what, x)?))
}

fn check_weights(weights: &[f64], points: &[f64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::invalid("at least one weight is required"));
    }
    if weights.len() != points.len() {
        return Err(Error::invalid(format!(
            "{} weights for {} points",
            weights.len(),
            points.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
        return Err(Error::invalid(format!(
            "weights must be non-negative, got {w}"
        )));
    }
    let total = Summation::Exact.sum(weights.iter().copied());
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::invalid(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

fn check_lambda(lam: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lam) {
        return Err(Error::invalid(format!("λ must lie in [0, 1], got {lam}")));
    }
    Ok(())
}

/// Both sides of the weighted refinement of Jensen's inequality:
/// `Σλ_r f(x_r) ≥ f(x̄) + Σλ_r f(|x_r − x̄|)`. Reversed for subquadratic `f`.
pub fn jensen_refinement(
    f: &FunctionModel,
    weights: &[f64],
    points: &[f64],
) -> Result<ChainEvaluation> {
    check_weights(weights, points)?;
    let points: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(r, &x)| f.check_arg(&format!("x_{}", r + 1), x))
        .collect::<Result<_>>()?;
    let sum = Summation::Compensated;
    let mean = sum.sum(weights.iter().zip(&points).map(|(w, x)| w * x));
    let lhs = sum.sum(weights.iter().zip(&points).map(|(w, &x)| w * f.value(x)));
    let mut dev = Vec::with_capacity(points.len());
    for (r, (&w, &x)) in weights.iter().zip(&points).enumerate() {
        dev.push(w * f_at(f, &format!("|x_{} − x̄|", r + 1), (x - mean).abs())?);
    }
    let rhs = f_at(f, "x̄", mean)? + sum.sum(dev);
    Ok(ChainEvaluation::new(
        vec![
            ("weighted_mean_of_f".into(), lhs),
            ("refined_jensen".into(), rhs),
        ],
        vec![
            ("weights".into(), weights.to_vec()),
            ("points".into(), points),
            ("mean".into(), vec![mean]),
        ],
        ChainOrientation::Decreasing,
    ))
}

/// The rungs of the iterated two-point refinement:
///
/// * `L0 = λf(x) + (1−λ)f(y)`
/// * `L1 = f(m) + λf((1−λ)d) + (1−λ)f(λd)`
/// * `L2 = f(m) + Σ_{k<t} f(2λ(1−λ)|1−2λ|^k d) + λf((1−λ)|1−2λ|^t d) + (1−λ)f(λ|1−2λ|^t d)`
/// * `L3 = f(m) + Σ_{k<t} f(2λ(1−λ)|1−2λ|^k d)`, only for positive `f`
///
/// with `m = λx + (1−λ)y` and `d = |x − y|`. `t` is capped at [`MAX_T`].
pub fn lemma1_chain(
    f: &FunctionModel,
    x: f64,
    y: f64,
    lam: f64,
    t: usize,
) -> Result<ChainEvaluation> {
    if t == 0 {
        return Err(Error::invalid("the refinement chain needs t ≥ 1"));
    }
    check_lambda(lam)?;
    let x = f.check_arg("x", x)?;
    let y = f.check_arg("y", y)?;
    let t = t.min(MAX_T);
    let mu = 1.0 - lam;
    let d = (x - y).abs();
    let q = (1.0 - 2.0 * lam).abs();
    let sum = Summation::Compensated;

    let l0 = lam * f.value(x) + mu * f.value(y);
    let fm = f_at(f, "λx + (1−λ)y", lam * x + mu * y)?;
    let pair = |scale: f64| -> Result<f64> {
        let p = lam * f_at(f, "(1−λ)|1−2λ|^t|x−y|", mu * scale * d)?;
        let r = mu * f_at(f, "λ|1−2λ|^t|x−y|", lam * scale * d)?;
        Ok(p + r)
    };
    let l1 = fm + pair(1.0)?;
    let mut ksum = Vec::with_capacity(t);
    for k in 0..t {
        ksum.push(f_at(
            f,
            "2λ(1−λ)|1−2λ|^k|x−y|",
            2.0 * lam * mu * q.powi(k as i32) * d,
        )?);
    }
    let ksum = sum.sum(ksum);
    let l2 = fm + (ksum + pair(q.powi(t as i32))?);

    let mut levels = vec![
        ("L0".to_string(), l0),
        ("L1".to_string(), l1),
        ("L2".to_string(), l2),
    ];
    if f.has_class(FunctionClass::Positive) {
        levels.push(("L3".to_string(), fm + ksum));
    }
    Ok(ChainEvaluation::new(
        levels,
        vec![
            ("x".into(), vec![x]),
            ("y".into(), vec![y]),
            ("lambda".into(), vec![lam]),
            ("t".into(), vec![t as f64]),
        ],
        ChainOrientation::Decreasing,
    ))
}

/// The bounds of the multi-pair lemma:
///
/// * `L0 = Σ_i [λ_i f((1−λ_i)A_i) + (1−λ_i) f(λ_i A_i)]`
/// * `L1 = Σ_{k=0}^{t} m f(Σ_i 2λ_i(1−λ_i)|1−2λ_i|^k A_i / m)`
/// * `L2 = Σ_{k=0}^{t} m f(Σ_i 2(1−λ_i)|1−2λ_i|^k A / m)` with
///   `A = min_i λ_i A_i`, when `use_common_a` is set.
pub fn lemma2_bound(
    f: &FunctionModel,
    lams: &[f64],
    a_vals: &[f64],
    t: usize,
    use_common_a: bool,
) -> Result<ChainEvaluation> {
    if lams.is_empty() || lams.len() != a_vals.len() {
        return Err(Error::invalid(format!(
            "need equally many λ_i and A_i (at least one), got {} and {}",
            lams.len(),
            a_vals.len()
        )));
    }
    for &l in lams {
        check_lambda(l)?;
    }
    let a_vals: Vec<f64> = a_vals
        .iter()
        .enumerate()
        .map(|(i, &a)| f.check_arg(&format!("A_{}", i + 1), a))
        .collect::<Result<_>>()?;
    let t = t.min(MAX_T);
    let m = lams.len() as f64;
    let sum = Summation::Compensated;

    let mut l0 = Vec::with_capacity(2 * lams.len());
    for (&l, &a) in lams.iter().zip(&a_vals) {
        l0.push(l * f_at(f, "(1−λ_i)A_i", (1.0 - l) * a)?);
        l0.push((1.0 - l) * f_at(f, "λ_i A_i", l * a)?);
    }
    let l0 = sum.sum(l0);

    let k_series = |coef: &dyn Fn(usize, usize) -> f64, what: &str| -> Result<f64> {
        let mut terms = Vec::with_capacity(t + 1);
        for k in 0..=t {
            let arg = sum.sum((0..lams.len()).map(|i| coef(i, k))) / m;
            terms.push(m * f_at(f, what, arg)?);
        }
        Ok(sum.sum(terms))
    };
    let q = |i: usize, k: usize| (1.0 - 2.0 * lams[i]).abs().powi(k as i32);
    let l1 = k_series(
        &|i, k| 2.0 * lams[i] * (1.0 - lams[i]) * q(i, k) * a_vals[i],
        "Σ 2λ_i(1−λ_i)|1−2λ_i|^k A_i / m",
    )?;

    let mut levels = vec![("L0".to_string(), l0), ("L1".to_string(), l1)];
    let mut params = vec![
        ("lambda".into(), lams.to_vec()),
        ("A".into(), a_vals.clone()),
        ("t".into(), vec![t as f64]),
    ];
    if use_common_a {
        let common = lams
            .iter()
            .zip(&a_vals)
            .map(|(l, a)| l * a)
            .fold(f64::INFINITY, f64::min);
        let l2 = k_series(
            &|i, k| 2.0 * (1.0 - lams[i]) * q(i, k) * common,
            "Σ 2(1−λ_i)|1−2λ_i|^k A / m",
        )?;
        levels.push(("L2".to_string(), l2));
        params.push(("common_A".into(), vec![common]));
    }
    Ok(ChainEvaluation::new(
        levels,
        params,
        ChainOrientation::Decreasing,
    ))
}

/// `Σλ_r f(x_r) ≤ 2 f(Σλ_r x_r)` for increasing subquadratic `f`, valid when
/// every `x_r ≤ 2 Σλ_i x_i`. The side condition is reported in
/// [`ChainEvaluation::condition`]; the levels are returned either way.
pub fn lemma3_bound(f: &FunctionModel, weights: &[f64], points: &[f64]) -> Result<ChainEvaluation> {
    check_weights(weights, points)?;
    let points: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(r, &x)| f.check_arg(&format!("x_{}", r + 1), x))
        .collect::<Result<_>>()?;
    let sum = Summation::Compensated;
    let mean = sum.sum(weights.iter().zip(&points).map(|(w, x)| w * x));
    let lhs = sum.sum(weights.iter().zip(&points).map(|(w, &x)| w * f.value(x)));
    let rhs = 2.0 * f_at(f, "x̄", mean)?;
    let scale = points.iter().fold(2.0 * mean, |m, x| m.max(*x));
    let condition = ConditionReport::from_slacks(
        "points_le_twice_mean",
        points
            .iter()
            .enumerate()
            .map(|(r, x)| (r + 1, 2.0 * mean - x)),
        scale,
    );
    let mut chain = ChainEvaluation::new(
        vec![
            ("weighted_mean_of_f".into(), lhs),
            ("twice_f_of_mean".into(), rhs),
        ],
        vec![
            ("weights".into(), weights.to_vec()),
            ("points".into(), points),
            ("mean".into(), vec![mean]),
        ],
        ChainOrientation::Increasing,
    );
    chain.condition = Some(condition);
    Ok(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::{catalog, certify, power, zero, DEFAULT_GRID};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_weights(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let mut w: Vec<f64> = raw.iter().map(|r| r / total).collect();
        // put the rounding residue on the last weight
        let head: f64 = w[..k - 1].iter().sum();
        w[k - 1] = 1.0 - head;
        w
    }

    fn certified(class: FunctionClass) -> Vec<FunctionModel> {
        catalog()
            .into_iter()
            .filter(|f| certify(f, class, DEFAULT_GRID).unwrap().passed)
            .collect()
    }

    #[test]
    fn jensen_examples() {
        let c = jensen_refinement(&power(3.0), &[0.5, 0.5], &[0.0, 1.0]).unwrap();
        assert_eq!(c.values(), vec![0.5, 0.25]);
        assert_eq!(c.margins, vec![0.25]);
        let c = jensen_refinement(&power(2.0), &[1.0], &[0.7]).unwrap();
        assert_eq!(c.margins[0], 0.0);
        assert!(jensen_refinement(&power(2.0), &[0.5, 0.4], &[0.1, 0.2]).is_err());
        assert!(jensen_refinement(&power(2.0), &[0.5, 0.5], &[0.1, 1.2]).is_err());
    }

    #[test]
    fn lemma1_examples() {
        // x = 0, y = 1, λ = 1/2, t = 2 for x³: m = 1/2, |1−2λ| = 0
        let c = lemma1_chain(&power(3.0), 0.0, 1.0, 0.5, 2).unwrap();
        let v = c.values();
        assert_eq!(v[0], 0.5);
        assert_eq!(v[1], 0.125 + 0.5 * 0.125 + 0.5 * 0.125);
        // f(1/2) + f(1/2) + f(0) + λ f(0) + (1−λ) f(0)
        assert_eq!(v[2], 0.25);
        assert_eq!(v[3], 0.25);
        assert!(c.margins.iter().all(|m| *m >= 0.0));

        for lam in [0.0, 1.0] {
            let c = lemma1_chain(&power(2.5), 0.3, 0.8, lam, 3).unwrap();
            let collapsed = if lam == 1.0 {
                power(2.5).value(0.3)
            } else {
                power(2.5).value(0.8)
            };
            for v in c.values() {
                assert_eq!(v, collapsed);
            }
        }
        assert!(lemma1_chain(&power(2.0), 0.1, 0.2, 0.3, 0).is_err());
        assert!(lemma1_chain(&power(2.0), 0.1, 0.2, 1.3, 1).is_err());
    }

    #[test]
    fn lemma1_t_is_capped() {
        let c = lemma1_chain(&power(2.0), 0.1, 0.9, 0.3, 1000).unwrap();
        assert_eq!(c.params[3].1, vec![MAX_T as f64]);
    }

    #[test]
    fn lemma1_without_positive_flag_has_three_rungs() {
        let neg = power(2.0).negate();
        assert_eq!(
            lemma1_chain(&neg, 0.1, 0.9, 0.3, 2).unwrap().levels.len(),
            3
        );
    }

    #[test]
    fn lemma2_examples() {
        let c = lemma2_bound(&power(2.0), &[0.5], &[1.0], 0, false).unwrap();
        assert_eq!(c.values(), vec![0.25, 0.25]);
        assert_eq!(c.margins, vec![0.0]);

        let z = zero();
        let c = lemma2_bound(&z, &[0.0, 0.0], &[0.3, 0.9], 2, true).unwrap();
        assert!(c.values().iter().all(|v| *v == 0.0));

        let cube = power(3.0);
        let c = lemma2_bound(&cube, &[1.0 / 3.0, 2.0 / 3.0], &[0.9, 0.6], 1, true).unwrap();
        let l0 = (1.0 / 3.0) * cube.value(0.6)
            + (2.0 / 3.0) * cube.value(0.3)
            + (2.0 / 3.0) * cube.value(0.2)
            + (1.0 / 3.0) * cube.value(0.4);
        assert!((c.values()[0] - l0).abs() < 1e-15);
        assert!(c.margins.iter().all(|m| *m >= 0.0), "{c:?}");
        assert!(c.values()[2] >= 0.0);
        assert!((c.params[3].1[0] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn lemma3_examples() {
        let f = power(1.5);
        let c = lemma3_bound(&f, &[0.25, 0.75], &[0.4, 0.4]).unwrap();
        assert!((c.margins[0] - f.value(0.4)).abs() < 1e-15);

        let id = power(1.0);
        let c = lemma3_bound(&id, &[0.5, 0.5], &[0.5, 1.0]).unwrap();
        assert_eq!(c.values(), vec![0.75, 1.5]);
        assert!(c.condition.as_ref().unwrap().holds);

        // points 1/4 and 3/4: max 3/4 ≤ 2 · 1/2
        let c = lemma3_bound(&f, &[0.5, 0.5], &[0.25, 0.75]).unwrap();
        assert!(c.condition.as_ref().unwrap().holds);
        assert!(c.margins[0] >= 0.0);

        let c = lemma3_bound(&f, &[0.9, 0.1], &[0.1, 1.0]).unwrap();
        let cond = c.condition.unwrap();
        assert!(!cond.holds);
        assert_eq!(cond.witness_index, Some(2));
    }

    #[test]
    fn squares_are_the_equality_case() {
        let sq = power(2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let k = rng.random_range(1..8);
            let w = random_weights(&mut rng, k);
            let p: Vec<f64> = (0..k).map(|_| rng.random()).collect();
            assert!(jensen_refinement(&sq, &w, &p).unwrap().margins[0].abs() < 1e-13);
            let t = rng.random_range(1..4);
            let c = lemma1_chain(&sq, rng.random(), rng.random(), rng.random(), t).unwrap();
            assert!(
                c.margins[0].abs() < 1e-13 && c.margins[1].abs() < 1e-13,
                "{c:?}"
            );
        }
    }

    #[test]
    fn superquadratic_catalog_satisfies_the_chains() {
        let fs = certified(FunctionClass::Superquadratic);
        assert!(fs.len() >= 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for f in &fs {
            for _ in 0..1000 {
                let k = rng.random_range(1..8);
                let w = random_weights(&mut rng, k);
                let p: Vec<f64> = (0..k).map(|_| rng.random()).collect();
                let c = jensen_refinement(f, &w, &p).unwrap();
                assert!(c.min_margin() >= -1e-9 * c.scale(), "{}: {c:?}", f.name());

                for t in 1..=3 {
                    let c = lemma1_chain(f, rng.random(), rng.random(), rng.random(), t).unwrap();
                    assert!(c.min_margin() >= -1e-9 * c.scale(), "{}: {c:?}", f.name());
                }
            }
            for _ in 0..500 {
                let m = rng.random_range(1..6);
                let lams: Vec<f64> = (0..m).map(|_| rng.random()).collect();
                let a: Vec<f64> = (0..m).map(|_| rng.random()).collect();
                let c = lemma2_bound(f, &lams, &a, rng.random_range(0..4), true).unwrap();
                assert!(c.min_margin() >= -1e-9 * c.scale(), "{}: {c:?}", f.name());
            }
        }
    }

    #[test]
    fn subquadratic_catalog_reverses_jensen_and_satisfies_lemma3() {
        let fs: Vec<FunctionModel> = certified(FunctionClass::Subquadratic)
            .into_iter()
            .filter(|f| {
                certify(f, FunctionClass::Increasing, DEFAULT_GRID)
                    .unwrap()
                    .passed
            })
            .collect();
        assert!(fs.len() >= 8);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for f in &fs {
            let mut checked = 0;
            while checked < 1000 {
                let k = rng.random_range(1..6);
                let w = random_weights(&mut rng, k);
                let p: Vec<f64> = (0..k).map(|_| rng.random()).collect();
                let j = jensen_refinement(f, &w, &p).unwrap();
                assert!(j.margins[0] <= 1e-9 * j.scale(), "{}: {j:?}", f.name());
                let c = lemma3_bound(f, &w, &p).unwrap();
                if c.condition.as_ref().unwrap().holds {
                    assert!(c.margins[0] >= -1e-9 * c.scale(), "{}: {c:?}", f.name());
                    checked += 1;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn lemma1_symmetry(x in 0.0f64..=1.0, y in 0.0f64..=1.0, lam in 0.0f64..=1.0, t in 1usize..6) {
            for f in [power(2.0), power(3.0), power(4.0)] {
                let a = lemma1_chain(&f, x, y, lam, t).unwrap();
                let b = lemma1_chain(&f, y, x, 1.0 - lam, t).unwrap();
                for (u, v) in a.values().iter().zip(b.values()) {
                    prop_assert!((u - v).abs() <= 1e-14);
                }
            }
        }

        #[test]
        fn margins_have_one_fewer_entry(m in 1usize..5, t in 0usize..4) {
            let lams = vec![0.3; m];
            let a = vec![0.5; m];
            let c = lemma2_bound(&power(3.0), &lams, &a, t, true).unwrap();
            prop_assert_eq!(c.margins.len() + 1, c.levels.len());
        }
    }
}
