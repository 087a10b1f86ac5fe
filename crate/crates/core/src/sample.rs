//! Ordered income samples.

use serde::Serialize;

use crate::error::{Error, Result};

/// Above this size prefix sums are accumulated with compensation.
const COMPENSATION_THRESHOLD: usize = 10_000;

/// Incomes sorted ascending together with their running totals.
///
/// Ranks are 1-based throughout: `order_stat(1)` is the smallest income and
/// `median_rank()` is `ceil(n / 2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    values: Vec<f64>,
    #[serde(skip)]
    prefix: Vec<f64>,
}

impl Sample {
    /// Sorts a copy of `values` (stable, ties kept in input order).
    pub fn new(values: impl Into<Vec<f64>>) -> Result<Self> {
        let mut values = values.into();
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidIncome {
                index: index + 1,
                value,
            });
        }
        values.sort_by(f64::total_cmp);
        Ok(Self::from_sorted(values))
    }

    /// Caller guarantees sorted, finite, non-negative, non-empty input.
    pub(crate) fn from_sorted(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let prefix = prefix_sums(&values);
        Sample { values, prefix }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// `prefix_sums()[i]` is the total of the `i` smallest incomes; entry 0 is 0.
    pub fn prefix_sums(&self) -> &[f64] {
        &self.prefix
    }

    /// X_{i:n}, 1-based.
    ///
    /// # Panics
    /// If `i` is 0 or exceeds `n`.
    pub fn order_stat(&self, i: usize) -> f64 {
        assert!(i >= 1 && i <= self.len(), "rank {i} outside 1..={}", self.len());
        self.values[i - 1]
    }

    /// Total of the `i` smallest incomes.
    pub fn lower_total(&self, i: usize) -> f64 {
        self.prefix[i]
    }

    pub fn total(&self) -> f64 {
        self.prefix[self.len()]
    }

    pub fn mean(&self) -> f64 {
        self.total() / self.len() as f64
    }

    /// M = ceil(n / 2).
    pub fn median_rank(&self) -> usize {
        self.len().div_ceil(2)
    }

    /// floor(n / 2), the number of terms in the median-based estimators.
    pub fn half(&self) -> usize {
        self.len() / 2
    }

    pub fn median(&self) -> f64 {
        self.order_stat(self.median_rank())
    }

    pub fn max(&self) -> f64 {
        self.values[self.len() - 1]
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    /// Empirical quantile Q_n(p) = X_{ceil(np):n} for 0 < p <= 1.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
        let n = self.len();
        let rank = ((n as f64 * p).ceil() as usize).clamp(1, n);
        Ok(self.order_stat(rank))
    }

    /// Applies `f` to every income and re-sorts.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Sample::new(self.values.iter().map(|&v| f(v)).collect::<Vec<_>>())
    }
}

fn prefix_sums(values: &[f64]) -> Vec<f64> {
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    if values.len() <= COMPENSATION_THRESHOLD {
        let mut acc = 0.0;
        for &v in values {
            acc += v;
            prefix.push(acc);
        }
    } else {
        // Neumaier summation
        let mut sum = 0.0_f64;
        let mut comp = 0.0_f64;
        for &v in values {
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
            prefix.push(sum + comp);
        }
    }
    prefix
}
