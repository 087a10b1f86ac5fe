//! Rank-preserving income transfers and their effect on the median-based
//! indices.
//!
//! A transfer `L <-c- H` moves `c` from the person of rank `H` to the person
//! of rank `L < H` while keeping every strict inequality between neighbouring
//! incomes. Whether each index goes down, stays put or goes up depends only
//! on where `L` and `H` sit relative to the median person `M = ceil(n/2)`,
//! except for the non-poor index with two well-off persons, where the
//! amount is compared with the threshold `c2`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::curves::Strategy;
use crate::error::{Error, Result};
use crate::format;
use crate::indices::psi_all;
use crate::sample::Sample;

/// Index changes at or below this magnitude count as "unchanged".
pub const UNCHANGED_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Standing {
    Struggling,
    Median,
    WellOff,
}

impl fmt::Display for Standing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Standing::Struggling => "struggling",
            Standing::Median => "median",
            Standing::WellOff => "well_off",
        })
    }
}

fn check_rank(s: &Sample, rank: usize) -> Result<()> {
    if rank >= 1 && rank <= s.len() {
        Ok(())
    } else {
        Err(Error::RankOutOfRange { rank, n: s.len() })
    }
}

pub fn classify(s: &Sample, rank: usize) -> Result<Standing> {
    check_rank(s, rank)?;
    let m = s.median_rank();
    Ok(match rank.cmp(&m) {
        std::cmp::Ordering::Less => Standing::Struggling,
        std::cmp::Ordering::Equal => Standing::Median,
        std::cmp::Ordering::Greater => Standing::WellOff,
    })
}

/// `receiver` (rank L) gets `amount` from `giver` (rank H).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transfer {
    pub receiver: usize,
    pub giver: usize,
    pub amount: f64,
}

impl Transfer {
    pub fn new(receiver: usize, giver: usize, amount: f64) -> Result<Self> {
        if receiver == 0 || receiver >= giver {
            return Err(Error::RankOrder { receiver, giver });
        }
        if !(amount.is_finite() && amount > 0.0) {
            return Err(Error::InadmissibleTransfer {
                amount,
                bound: f64::NAN,
            });
        }
        Ok(Transfer {
            receiver,
            giver,
            amount,
        })
    }
}

impl fmt::Display for Transfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <-{}- {}", self.receiver, self.amount, self.giver)
    }
}

fn check_pair(s: &Sample, receiver: usize, giver: usize) -> Result<()> {
    check_rank(s, receiver)?;
    check_rank(s, giver)?;
    if receiver >= giver {
        return Err(Error::RankOrder { receiver, giver });
    }
    Ok(())
}

/// Supremum of the amounts that keep the ordering strict: the gap above `L`
/// and the gap below `H`, or half the gap between them when adjacent.
/// A tie next to either person leaves no admissible amount.
pub fn max_admissible(s: &Sample, receiver: usize, giver: usize) -> Result<f64> {
    check_pair(s, receiver, giver)?;
    let xl = s.order_stat(receiver);
    let xh = s.order_stat(giver);
    let tied_below_l = receiver > 1 && s.order_stat(receiver - 1) >= xl;
    let tied_above_h = giver < s.len() && s.order_stat(giver + 1) <= xh;
    if tied_below_l || tied_above_h {
        return Err(Error::NoAdmissibleTransfer { receiver, giver });
    }
    let bound = if giver == receiver + 1 {
        0.5 * (xh - xl)
    } else {
        let above_l = s.order_stat(receiver + 1) - xl;
        let below_h = xh - s.order_stat(giver - 1);
        above_l.min(below_h)
    };
    if bound > 0.0 {
        Ok(bound)
    } else {
        Err(Error::NoAdmissibleTransfer { receiver, giver })
    }
}

pub fn apply_transfer(s: &Sample, t: &Transfer) -> Result<Sample> {
    let bound = max_admissible(s, t.receiver, t.giver)?;
    if !(t.amount > 0.0 && t.amount < bound) {
        return Err(Error::InadmissibleTransfer {
            amount: t.amount,
            bound,
        });
    }
    let mut values = s.values().to_vec();
    values[t.receiver - 1] += t.amount;
    values[t.giver - 1] -= t.amount;
    Ok(Sample::from_sorted(values))
}

fn check_well_off_pair(s: &Sample, receiver: usize, giver: usize) -> Result<usize> {
    check_pair(s, receiver, giver)?;
    let m = s.median_rank();
    if receiver <= m {
        return Err(Error::Precondition(format!(
            "threshold needs two well-off persons: L={receiver} is not above M={m}"
        )));
    }
    Ok(m)
}

// (a * xh^2 - b * xl^2) / (a * xh + b * xl)
fn weighted_threshold(a: f64, b: f64, xl: f64, xh: f64) -> Result<f64> {
    let den = a * xh + b * xl;
    if den == 0.0 {
        return Err(Error::ZeroDenominator {
            context: "threshold",
            term: "both partner incomes are 0".into(),
        });
    }
    Ok((a * xh * xh - b * xl * xl) / den)
}

/// Amount above which a transfer between two well-off persons lowers Ψ₂,ₙ.
pub fn threshold_c2(s: &Sample, receiver: usize, giver: usize) -> Result<f64> {
    let m = check_well_off_pair(s, receiver, giver)?;
    weighted_threshold(
        s.order_stat(receiver - m),
        s.order_stat(giver - m),
        s.order_stat(receiver),
        s.order_stat(giver),
    )
}

/// Amount a transfer between two well-off persons would need to reach
/// before Ψ₃,ₙ stopped rising; never below the admissibility bound.
pub fn threshold_c3(s: &Sample, receiver: usize, giver: usize) -> Result<f64> {
    check_well_off_pair(s, receiver, giver)?;
    let n = s.len();
    weighted_threshold(
        s.order_stat(n - receiver + 1),
        s.order_stat(n - giver + 1),
        s.order_stat(receiver),
        s.order_stat(giver),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Decrease,
    Unchanged,
    Increase,
}

impl Direction {
    pub fn observe(before: f64, after: f64) -> Self {
        let delta = after - before;
        if delta.abs() <= UNCHANGED_TOLERANCE {
            Direction::Unchanged
        } else if delta < 0.0 {
            Direction::Decrease
        } else {
            Direction::Increase
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Decrease => "decrease",
            Direction::Unchanged => "unchanged",
            Direction::Increase => "increase",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

fn compare_partners(lower_side: f64, upper_side: f64, when_distinct: Direction) -> Direction {
    if lower_side == upper_side {
        Direction::Unchanged
    } else {
        when_distinct
    }
}

/// Direction in which index `k` moves under an admissible transfer.
///
/// Transfers involving the median person are not covered and are refused.
/// When two struggling persons trade, the change is governed by the pair of
/// upper order statistics they are compared with; if those happen to be tied
/// the index is left unchanged.
pub fn predict_effect(s: &Sample, k: Strategy, t: &Transfer) -> Result<Direction> {
    let bound = max_admissible(s, t.receiver, t.giver)?;
    if !(t.amount > 0.0 && t.amount < bound) {
        return Err(Error::InadmissibleTransfer {
            amount: t.amount,
            bound,
        });
    }
    let n = s.len();
    let m = s.median_rank();
    let (l, h) = (t.receiver, t.giver);
    if l == m || h == m {
        return Err(Error::MedianInvolved {
            receiver: l,
            giver: h,
            median: m,
        });
    }
    let crossing = l < m && m < h;
    let both_well_off = m < l;
    if crossing {
        return Ok(Direction::Decrease);
    }
    let direction = match k {
        Strategy::Population => Direction::Unchanged,
        Strategy::NonPoor if both_well_off => {
            let (a, b) = (s.order_stat(l - m), s.order_stat(h - m));
            if a == 0.0 && b == 0.0 {
                Direction::Unchanged
            } else {
                let c2 = threshold_c2(s, l, h)?;
                match t.amount.partial_cmp(&c2) {
                    Some(std::cmp::Ordering::Greater) => Direction::Decrease,
                    Some(std::cmp::Ordering::Equal) => Direction::Unchanged,
                    _ => Direction::Increase,
                }
            }
        }
        Strategy::NonPoor => compare_partners(
            s.order_stat(m + l),
            s.order_stat(m + h),
            Direction::Decrease,
        ),
        Strategy::Richest if both_well_off => Direction::Increase,
        Strategy::Richest => compare_partners(
            s.order_stat(n - h + 1),
            s.order_stat(n - l + 1),
            Direction::Increase,
        ),
    };
    Ok(direction)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// Ordering bound (X_H - X_L) / 2.
    pub c0: f64,
    pub c2: f64,
    pub c3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferOutcome {
    pub new_sample: Sample,
    pub before: [f64; 3],
    pub after: [f64; 3],
    /// `None` where no prediction applies (median person involved).
    pub predicted: [Option<Direction>; 3],
    pub observed: [Direction; 3],
    /// Present when both persons are well-off.
    pub thresholds: Option<Thresholds>,
}

impl TransferOutcome {
    /// Every available prediction matches the recomputed change.
    pub fn is_consistent(&self) -> bool {
        self.predicted
            .iter()
            .zip(&self.observed)
            .all(|(p, o)| p.is_none_or(|p| p == *o))
    }
}

/// Applies `t`, recomputes the three indices and compares with the
/// predicted directions.
pub fn evaluate_transfer(s: &Sample, t: &Transfer) -> Result<TransferOutcome> {
    let new_sample = apply_transfer(s, t)?;
    let before = psi_all(s)?;
    let after = psi_all(&new_sample)?;
    let mut predicted = [None; 3];
    for (slot, k) in predicted.iter_mut().zip(Strategy::ALL) {
        *slot = match predict_effect(s, k, t) {
            Ok(d) => Some(d),
            Err(Error::MedianInvolved { .. }) => None,
            Err(e) => return Err(e),
        };
    }
    let observed = [0, 1, 2].map(|i| Direction::observe(before[i], after[i]));
    let m = s.median_rank();
    let thresholds = if t.receiver > m {
        let (xl, xh) = (s.order_stat(t.receiver), s.order_stat(t.giver));
        Some(Thresholds {
            c0: 0.5 * (xh - xl),
            c2: threshold_c2(s, t.receiver, t.giver).unwrap_or(f64::NAN),
            c3: threshold_c3(s, t.receiver, t.giver)?,
        })
    } else {
        None
    };
    Ok(TransferOutcome {
        new_sample,
        before,
        after,
        predicted,
        observed,
        thresholds,
    })
}

/// One executed step of a plan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanStep {
    pub step: usize,
    pub transfer: Transfer,
    pub sample: Sample,
    pub psi: [f64; 3],
    pub predicted: [Option<Direction>; 3],
    pub observed: [Direction; 3],
}

/// Ordered transfers, read from `L H c` lines.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TransferPlan {
    pub steps: Vec<Transfer>,
}

impl FromStr for TransferPlan {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |reason: String| Error::PlanSyntax {
                line: i + 1,
                reason,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(syntax(format!("expected `L H c`, got `{line}`")));
            }
            let rank = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| syntax(format!("`{s}` is not a rank")))
            };
            let amount: f64 = fields[2]
                .parse()
                .map_err(|_| syntax(format!("`{}` is not an amount", fields[2])))?;
            let t = Transfer::new(rank(fields[0])?, rank(fields[1])?, amount)
                .map_err(|e| syntax(e.to_string()))?;
            steps.push(t);
        }
        Ok(TransferPlan { steps })
    }
}

impl TransferPlan {
    pub fn run(&self, s: &Sample) -> Result<Vec<PlanStep>> {
        run_plan(s, &self.steps)
    }
}

/// Executes the transfers in order. Stops at the first inadmissible step,
/// reporting its 1-based number.
pub fn run_plan(s: &Sample, plan: &[Transfer]) -> Result<Vec<PlanStep>> {
    let mut current = s.clone();
    let mut out = Vec::with_capacity(plan.len());
    for (i, t) in plan.iter().enumerate() {
        let step = i + 1;
        let outcome = evaluate_transfer(&current, t).map_err(|e| Error::PlanStep {
            step,
            source: Box::new(e),
        })?;
        current = outcome.new_sample.clone();
        out.push(PlanStep {
            step,
            transfer: *t,
            sample: outcome.new_sample,
            psi: outcome.after,
            predicted: outcome.predicted,
            observed: outcome.observed,
        });
    }
    Ok(out)
}

pub const TRAJECTORY_HEADER: &str = "step,L,H,c,psi1,psi2,psi3";

/// Trajectory CSV, one row per executed step.
pub fn trajectory_csv(steps: &[PlanStep], precision: usize) -> String {
    let mut out = String::from(TRAJECTORY_HEADER);
    out.push('\n');
    for st in steps {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            st.step,
            st.transfer.receiver,
            st.transfer.giver,
            st.transfer.amount,
            format::fixed(st.psi[0], precision),
            format::fixed(st.psi[1], precision),
            format::fixed(st.psi[2], precision)
        ));
    }
    out
}
