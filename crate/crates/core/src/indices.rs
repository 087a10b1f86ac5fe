//! Empirical inequality indices computed from an ordered sample.
//!
//! The three median-based indices average ratios of order statistics over
//! the lower half of the sample; the Gini, Zenga, Davydov-Greselin and
//! median-normalised Gini estimators run in O(n) off the cached prefix sums.

use serde::Serialize;

use crate::curves::Strategy;
use crate::error::{Error, Result};
use crate::sample::Sample;

fn order_stat_name(i: usize, n: usize) -> String {
    format!("X_{{{i}:{n}}} = 0")
}

/// Median-based index for any of the three strategies.
pub fn psi_n(s: &Sample, k: Strategy) -> Result<f64> {
    let n = s.len();
    let half = s.half();
    if half == 0 {
        return Err(Error::SampleTooSmall {
            what: "median-based index",
            n,
            min: 2,
        });
    }
    let m = s.median_rank();
    let mut sum = 0.0;
    for j in 1..=half {
        let den_rank = match k {
            Strategy::Population => m,
            Strategy::NonPoor => m + j,
            Strategy::Richest => n - j + 1,
        };
        let den = s.order_stat(den_rank);
        if den == 0.0 {
            return Err(Error::ZeroDenominator {
                context: "sample",
                term: order_stat_name(den_rank, n),
            });
        }
        sum += s.order_stat(j) / den;
    }
    Ok(1.0 - sum / half as f64)
}

pub fn psi1_n(s: &Sample) -> Result<f64> {
    psi_n(s, Strategy::Population)
}

pub fn psi2_n(s: &Sample) -> Result<f64> {
    psi_n(s, Strategy::NonPoor)
}

pub fn psi3_n(s: &Sample) -> Result<f64> {
    psi_n(s, Strategy::Richest)
}

/// Ψ₁,ₙ, Ψ₂,ₙ, Ψ₃,ₙ in one go.
pub fn psi_all(s: &Sample) -> Result<[f64; 3]> {
    Ok([psi1_n(s)?, psi2_n(s)?, psi3_n(s)?])
}

fn positive_total(s: &Sample, context: &'static str) -> Result<f64> {
    let total = s.total();
    if total > 0.0 {
        Ok(total)
    } else {
        Err(Error::ZeroDenominator {
            context,
            term: "total income = 0".into(),
        })
    }
}

/// Gini index with the 1/n small-sample term:
/// `1 - sum_i (2(n-i)+1) X_i / (n^2 mean)`.
pub fn gini_n(s: &Sample) -> Result<f64> {
    let total = positive_total(s, "sample")?;
    let n = s.len() as f64;
    let cumulative: f64 = s.prefix_sums()[1..].iter().sum();
    Ok(1.0 - (2.0 * cumulative - total) / (n * total))
}

/// Zenga index: one minus the average ratio of the lower-group mean to the
/// upper-group mean, over the n-1 splits, divided by n.
pub fn zenga_n(s: &Sample) -> Result<f64> {
    let n = s.len();
    let total = positive_total(s, "sample")?;
    let mut sum = 0.0;
    for i in 1..n {
        let lower = s.lower_total(i);
        let upper = total - lower;
        if upper <= 0.0 {
            return Err(Error::ZeroDenominator {
                context: "sample",
                term: format!("upper mean above rank {i} = 0"),
            });
        }
        sum += (lower / i as f64) / (upper / (n - i) as f64);
    }
    Ok(1.0 - sum / n as f64)
}

/// Davydov-Greselin index: compares the `i` poorest with the `i` richest.
pub fn dg_n(s: &Sample) -> Result<f64> {
    let n = s.len();
    let total = positive_total(s, "sample")?;
    let mut sum = 0.0;
    for i in 1..=n {
        let top = total - s.lower_total(n - i);
        if top <= 0.0 {
            return Err(Error::ZeroDenominator {
                context: "sample",
                term: format!("total of the {i} richest = 0"),
            });
        }
        sum += s.lower_total(i) / top;
    }
    Ok(1.0 - sum / n as f64)
}

/// Gini mean difference over twice the median. No small-sample correction
/// is applied, so tiny samples can give slightly negative values.
pub fn g2_n(s: &Sample) -> Result<f64> {
    let n = s.len();
    let median = s.median();
    if median == 0.0 {
        return Err(Error::ZeroDenominator {
            context: "sample",
            term: order_stat_name(s.median_rank(), n),
        });
    }
    let cumulative: f64 = s.prefix_sums()[1..].iter().sum();
    let nf = n as f64;
    Ok(s.mean() / median - 2.0 / (nf * nf) * cumulative / median)
}

/// All seven indices for one cohort.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexReport {
    pub mean: f64,
    pub median: f64,
    #[serde(rename = "n_T")]
    pub n_total: usize,
    #[serde(rename = "n_P")]
    pub n_positive: usize,
    pub gini: f64,
    pub zenga: f64,
    pub dg: f64,
    pub g2: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub psi3: f64,
}

impl IndexReport {
    /// `s` holds the analysed incomes; `n_total` counts every record of the
    /// cohort, including those left out of `s`.
    pub fn compute(s: &Sample, n_total: usize) -> Result<Self> {
        if n_total < s.len() {
            return Err(Error::CountMismatch {
                n_total,
                n: s.len(),
            });
        }
        let [psi1, psi2, psi3] = psi_all(s)?;
        Ok(IndexReport {
            mean: s.mean(),
            median: s.median(),
            n_total,
            n_positive: s.len(),
            gini: gini_n(s)?,
            zenga: zenga_n(s)?,
            dg: dg_n(s)?,
            g2: g2_n(s)?,
            psi1,
            psi2,
            psi3,
        })
    }

    pub fn psi(&self, k: Strategy) -> f64 {
        match k {
            Strategy::Population => self.psi1,
            Strategy::NonPoor => self.psi2,
            Strategy::Richest => self.psi3,
        }
    }

    pub const CSV_HEADER: &'static str = "label,mean,median,n_T,n_P,G,Z,D,G2,Psi1,Psi2,Psi3";

    /// Row matching [`IndexReport::CSV_HEADER`].
    pub fn csv_row(&self, label: &str, precision: usize) -> String {
        let f = |v: f64| crate::format::fixed(v, precision);
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            crate::format::csv_field(label),
            f(self.mean),
            f(self.median),
            self.n_total,
            self.n_positive,
            f(self.gini),
            f(self.zenga),
            f(self.dg),
            f(self.g2),
            f(self.psi1),
            f(self.psi2),
            f(self.psi3)
        )
    }
}

pub fn full_report(s: &Sample, n_total: usize) -> Result<IndexReport> {
    IndexReport::compute(s, n_total)
}
