//! Error-compensated accumulation.
//!
//! Margins of the inequalities checked in this crate are frequently many
//! orders of magnitude smaller than the sums they are formed from, so every
//! sum goes through one of the accumulators here rather than a naive fold.

use std::ops::AddAssign;

/// Accumulation strategy used by the averages and bound evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Summation {
    /// Neumaier's improved Kahan summation. Error is bounded independently
    /// of the number of terms to first order.
    #[default]
    Compensated,
    /// Shewchuk's exact partials: the returned sum is the correctly rounded
    /// value of the exact sum of the terms. Used to re-check suspected
    /// violations.
    Exact,
}

impl Summation {
    pub fn sum<I>(self, terms: I) -> f64
    where
        I: IntoIterator<Item = f64>,
    {
        match self {
            Summation::Compensated => {
                let mut acc = NeumaierSum::default();
                for x in terms {
                    acc += x;
                }
                acc.value()
            }
            Summation::Exact => {
                let mut acc = ExactSum::default();
                for x in terms {
                    acc += x;
                }
                acc.value()
            }
        }
    }
}

/// Running Neumaier sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }
}

/// Exact accumulation with non-overlapping partials (the algorithm behind
/// Python's `math.fsum`).
#[derive(Debug, Clone, Default)]
pub struct ExactSum {
    partials: Vec<f64>,
    special: Option<f64>,
}

impl AddAssign<f64> for ExactSum {
    fn add_assign(&mut self, x: f64) {
        if !x.is_finite() {
            self.special = Some(self.special.map_or(x, |s| s + x));
            return;
        }
        let mut x = x;
        let mut kept = 0;
        for k in 0..self.partials.len() {
            let mut y = self.partials[k];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        self.partials.truncate(kept);
        self.partials.push(x);
    }
}

impl ExactSum {
    pub fn value(&self) -> f64 {
        if let Some(s) = self.special {
            return s;
        }
        let mut n = self.partials.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = self.partials[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = self.partials[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        // Correct rounding when the remaining partials would tip a half-way case.
        if n > 0
            && ((lo < 0.0 && self.partials[n - 1] < 0.0)
                || (lo > 0.0 && self.partials[n - 1] > 0.0))
        {
            let y = lo * 2.0;
            let x = hi + y;
            let yr = x - hi;
            if y == yr {
                hi = x;
            }
        }
        hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cancellation_is_recovered() {
        let terms = [1e16, 1.0, -1e16];
        assert_eq!(terms.iter().sum::<f64>(), 0.0);
        assert_eq!(Summation::Compensated.sum(terms), 1.0);
        assert_eq!(Summation::Exact.sum(terms), 1.0);
    }

    #[test]
    fn exact_sum_of_tenths() {
        let terms = [0.1; 10];
        assert_eq!(Summation::Exact.sum(terms.iter().copied()), 1.0);
    }

    #[test]
    fn empty_sum_is_zero() {
        assert_eq!(Summation::Compensated.sum(std::iter::empty()), 0.0);
        assert_eq!(Summation::Exact.sum(std::iter::empty()), 0.0);
    }

    #[test]
    fn non_finite_propagates() {
        assert!(Summation::Exact.sum([1.0, f64::NAN]).is_nan());
        assert_eq!(Summation::Exact.sum([1.0, f64::INFINITY]), f64::INFINITY);
    }

    proptest! {
        #[test]
        fn order_invariance(xs in prop::collection::vec(-1e6f64..1e6, 0..400)) {
            let fwd = Summation::Exact.sum(xs.iter().copied());
            let rev = Summation::Exact.sum(xs.iter().rev().copied());
            prop_assert_eq!(fwd, rev);
            let cf = Summation::Compensated.sum(xs.iter().copied());
            let cr = Summation::Compensated.sum(xs.iter().rev().copied());
            let scale = xs.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
            prop_assert!((cf - cr).abs() <= 1e-14 * scale);
            prop_assert!((cf - fwd).abs() <= 1e-14 * scale);
        }
    }
}
