//! Equality curves of a parametric model and the inequality indices given by
//! the area above them.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{QuadratureConfig, UnitRule};
use crate::quantile::QuantileModel;

/// Which reference median the poorest `p` fraction is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    /// Median of the whole population: Q(p/2) / Q(1/2).
    Population,
    /// Median of the non-poor: Q(p/2) / Q(1/2 + p/2).
    NonPoor,
    /// Median of the richest `p` fraction: Q(p/2) / Q(1 - p/2).
    Richest,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Population, Strategy::NonPoor, Strategy::Richest];

    pub fn from_index(k: u32) -> Result<Self> {
        match k {
            1 => Ok(Strategy::Population),
            2 => Ok(Strategy::NonPoor),
            3 => Ok(Strategy::Richest),
            _ => Err(Error::InvalidStrategy(k)),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Strategy::Population => 1,
            Strategy::NonPoor => 2,
            Strategy::Richest => 3,
        }
    }

    fn reference_level(self, p: f64) -> f64 {
        match self {
            Strategy::Population => 0.5,
            Strategy::NonPoor => 0.5 + 0.5 * p,
            Strategy::Richest => 1.0 - 0.5 * p,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Value of the equality curve at `p`, in [0, 1].
pub fn psi(model: &QuantileModel, k: Strategy, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let ratio = model.quantile_ratio(0.5 * p, k.reference_level(p))?;
    Ok(ratio.min(1.0))
}

/// 1 minus the integral of the equality curve, using a precomputed rule.
pub fn psi_index_with(model: &QuantileModel, k: Strategy, rule: &UnitRule) -> Result<f64> {
    let area = rule.integrate(|p| psi(model, k, p))?;
    Ok((1.0 - area).clamp(0.0, 1.0))
}

pub fn psi_index(model: &QuantileModel, k: Strategy, quad: &QuadratureConfig) -> Result<f64> {
    psi_index_with(model, k, &UnitRule::new(quad)?)
}

/// Sampled equality curve together with its index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSamples {
    pub strategy: u32,
    pub model: String,
    pub index: f64,
    pub points: Vec<(f64, f64)>,
}

/// Samples the curve at `p = i / (n_points + 1)`, `i = 1..=n_points`.
pub fn curve_samples(model: &QuantileModel, k: Strategy, n_points: usize) -> Result<CurveSamples> {
    curve_samples_with(model, k, n_points, &QuadratureConfig::default())
}

/// As [`curve_samples`], with the index integrated under `quad`.
pub fn curve_samples_with(
    model: &QuantileModel,
    k: Strategy,
    n_points: usize,
    quad: &QuadratureConfig,
) -> Result<CurveSamples> {
    if n_points < 2 {
        return Err(Error::Precondition(format!(
            "curve needs at least 2 points, got {n_points}"
        )));
    }
    let step = 1.0 / (n_points as f64 + 1.0);
    let points = (1..=n_points)
        .map(|i| {
            let p = i as f64 * step;
            psi(model, k, p).map(|v| (p, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let index = psi_index(model, k, quad)?;
    Ok(CurveSamples {
        strategy: k.index(),
        model: model.label(),
        index,
        points,
    })
}

impl CurveSamples {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# strategy={} index={} model={}\np,psi\n",
            self.strategy, self.index, self.model
        );
        for (p, v) in &self.points {
            out.push_str(&format!("{p},{v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses the CSV produced by [`CurveSamples::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::Precondition(format!("curve csv: {reason}"));
        let mut lines = text.lines();
        let meta = lines
            .next()
            .and_then(|l| l.strip_prefix("# "))
            .ok_or_else(|| bad("missing comment line"))?;
        let (head, model) = meta
            .split_once(" model=")
            .ok_or_else(|| bad("missing model"))?;
        let mut strategy = None;
        let mut index = None;
        for kv in head.split_whitespace() {
            match kv.split_once('=') {
                Some(("strategy", v)) => strategy = v.parse().ok(),
                Some(("index", v)) => index = v.parse().ok(),
                _ => return Err(bad("unexpected field in comment line")),
            }
        }
        if lines.next() != Some("p,psi") {
            return Err(bad("missing `p,psi` header"));
        }
        let points = lines
            .filter(|l| !l.trim().is_empty())
            .map(|l| {
                let (p, v) = l.split_once(',').ok_or_else(|| bad("malformed row"))?;
                Ok((
                    p.parse().map_err(|_| bad("bad p"))?,
                    v.parse().map_err(|_| bad("bad psi"))?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CurveSamples {
            strategy: strategy.ok_or_else(|| bad("missing strategy"))?,
            model: model.to_string(),
            index: index.ok_or_else(|| bad("missing index"))?,
            points,
        })
    }
}

/// Index values closer than this share a rank range.
pub const RANK_TIE_TOLERANCE: f64 = 1e-4;

/// A rank or a shared range of ranks, printed as `5` or `3-4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankRange {
    pub first: usize,
    pub last: usize,
}

impl fmt::Display for RankRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.first == self.last {
            write!(f, "{}", self.first)
        } else {
            write!(f, "{}-{}", self.first, self.last)
        }
    }
}

/// Rank 1 is the smallest value. Values within [`RANK_TIE_TOLERANCE`] of
/// their sorted neighbour form one tied group. Output follows input order.
pub fn rank_values(values: &[f64]) -> Vec<RankRange> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![RankRange { first: 0, last: 0 }; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start;
        while end + 1 < order.len()
            && values[order[end + 1]] - values[order[end]] <= RANK_TIE_TOLERANCE
        {
            end += 1;
        }
        let range = RankRange {
            first: start + 1,
            last: end + 1,
        };
        for &i in &order[start..=end] {
            ranks[i] = range;
        }
        start = end + 1;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedModel {
    pub label: String,
    pub index: f64,
    pub rank: RankRange,
}

pub fn rank_models(
    entries: &[(String, QuantileModel)],
    k: Strategy,
    quad: &QuadratureConfig,
) -> Result<Vec<RankedModel>> {
    if entries.is_empty() {
        return Err(Error::Precondition("nothing to rank".into()));
    }
    let rule = UnitRule::new(quad)?;
    let values = entries
        .par_iter()
        .map(|(_, m)| psi_index_with(m, k, &rule))
        .collect::<Result<Vec<_>>>()?;
    let ranks = rank_values(&values);
    Ok(entries
        .iter()
        .zip(values)
        .zip(ranks)
        .map(|(((label, _), index), rank)| RankedModel {
            label: label.clone(),
            index,
            rank,
        })
        .collect())
}

/// One row of the three-index comparison table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexTableRow {
    pub label: String,
    pub psi: [f64; 3],
    pub ranks: [RankRange; 3],
}

/// All three indices and their rankings for a list of labelled models.
pub fn index_table(
    entries: &[(String, QuantileModel)],
    quad: &QuadratureConfig,
) -> Result<Vec<IndexTableRow>> {
    if entries.is_empty() {
        return Err(Error::Precondition("nothing to rank".into()));
    }
    let rule = UnitRule::new(quad)?;
    let psis = entries
        .par_iter()
        .map(|(_, m)| {
            let mut out = [0.0; 3];
            for (slot, k) in out.iter_mut().zip(Strategy::ALL) {
                *slot = psi_index_with(m, k, &rule)?;
            }
            Ok(out)
        })
        .collect::<Result<Vec<[f64; 3]>>>()?;
    let columns: Vec<Vec<RankRange>> = (0..3)
        .map(|j| rank_values(&psis.iter().map(|row| row[j]).collect::<Vec<_>>()))
        .collect();
    Ok(entries
        .iter()
        .enumerate()
        .map(|(i, (label, _))| IndexTableRow {
            label: label.clone(),
            psi: psis[i],
            ranks: [columns[0][i], columns[1][i], columns[2][i]],
        })
        .collect())
}

/// The sixteen reference models: two parameter choices for each of eight
/// families plus the uniform and exponential benchmarks, all with unit
/// scale and zero log-location.
pub fn reference_catalog() -> Vec<(String, QuantileModel)> {
    let m = |r: Result<QuantileModel>| r.expect("catalog parameters are valid");
    vec![
        ("Uniform(0, theta)".into(), m(QuantileModel::uniform(1.0))),
        ("Exponential(0, theta)".into(), m(QuantileModel::exponential(1.0))),
        ("Gamma(theta, alpha=0.5)".into(), m(QuantileModel::gamma(1.0, 0.5))),
        ("Gamma(theta, alpha=2)".into(), m(QuantileModel::gamma(1.0, 2.0))),
        ("Weibull(theta, tau=0.5)".into(), m(QuantileModel::weibull(1.0, 0.5))),
        ("Weibull(theta, tau=2)".into(), m(QuantileModel::weibull(1.0, 2.0))),
        ("Lognormal(mu, sigma=1)".into(), m(QuantileModel::lognormal(0.0, 1.0))),
        ("Lognormal(mu, sigma=2)".into(), m(QuantileModel::lognormal(0.0, 2.0))),
        ("Log-Cauchy(mu, sigma=1)".into(), m(QuantileModel::log_cauchy(0.0, 1.0))),
        ("Log-Cauchy(mu, sigma=2)".into(), m(QuantileModel::log_cauchy(0.0, 2.0))),
        ("Pareto-II(sigma, alpha=1)".into(), m(QuantileModel::pareto_ii(1.0, 1.0))),
        ("Pareto-II(sigma, alpha=2)".into(), m(QuantileModel::pareto_ii(1.0, 2.0))),
        ("Pareto-III(sigma, gamma=0.5)".into(), m(QuantileModel::pareto_iii(1.0, 0.5))),
        ("Pareto-III(sigma, gamma=2)".into(), m(QuantileModel::pareto_iii(1.0, 2.0))),
        (
            "Pareto-IV(sigma, alpha=0.5, gamma=0.5)".into(),
            m(QuantileModel::pareto_iv(1.0, 0.5, 0.5)),
        ),
        (
            "Pareto-IV(sigma, alpha=2, gamma=2)".into(),
            m(QuantileModel::pareto_iv(1.0, 2.0, 2.0)),
        ),
    ]
}
