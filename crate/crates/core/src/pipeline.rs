//! Survey-style ingestion: household records are summed over their capital
//! income components, equivalized with the modified OECD scale, converted to
//! a reference currency and grouped into cohorts whose indices are ranked.
//!
//! Estimation is unweighted and one record is one analysis unit; any
//! aggregation over household members must already be done in the input.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::Strategy;
use crate::error::{Error, Result};
use crate::format::csv_field;
use crate::indices::IndexReport;
use crate::sample::Sample;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HouseholdRecord {
    pub group: String,
    pub rental_income: f64,
    pub capital_investment_income: f64,
    pub private_pension_income: f64,
    pub adults: u32,
    pub children_under_14: u32,
    pub currency: String,
}

impl HouseholdRecord {
    pub fn capital_income(&self) -> f64 {
        self.rental_income + self.capital_investment_income + self.private_pension_income
    }

    fn validate(&self, record: usize) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidRecord { record, reason });
        for (name, v) in [
            ("rental_income", self.rental_income),
            ("capital_investment_income", self.capital_investment_income),
            ("private_pension_income", self.private_pension_income),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} = {v} must be finite and non-negative"));
            }
        }
        if self.adults < 1 {
            return bad("a household needs at least one adult".into());
        }
        Ok(())
    }
}

/// Input column name for each record field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColumnMap {
    pub group: String,
    pub rental_income: String,
    pub capital_investment_income: String,
    pub private_pension_income: String,
    pub adults: String,
    pub children_under_14: String,
    pub currency: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            group: "group".into(),
            rental_income: "rental_income".into(),
            capital_investment_income: "capital_investment_income".into(),
            private_pension_income: "private_pension_income".into(),
            adults: "adults".into(),
            children_under_14: "children_under_14".into(),
            currency: "currency".into(),
        }
    }
}

/// Modified OECD equivalence scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OecdWeights {
    pub head: f64,
    pub other_adult: f64,
    pub child: f64,
}

impl Default for OecdWeights {
    fn default() -> Self {
        OecdWeights {
            head: 1.0,
            other_adult: 0.5,
            child: 0.3,
        }
    }
}

impl OecdWeights {
    pub fn household_size(&self, adults: u32, children: u32) -> f64 {
        self.head
            + self.other_adult * f64::from(adults.saturating_sub(1))
            + self.child * f64::from(children)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub columns: ColumnMap,
    /// Multiplier taking one unit of each currency to the reference currency.
    pub exchange_rates: BTreeMap<String, f64>,
    /// Converted at rate 1 when absent from `exchange_rates`.
    pub reference_currency: Option<String>,
    pub oecd_weights: OecdWeights,
    pub positive_income_filter: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            columns: ColumnMap::default(),
            exchange_rates: BTreeMap::new(),
            reference_currency: None,
            oecd_weights: OecdWeights::default(),
            positive_income_filter: true,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: PipelineConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        for (code, &rate) in &self.exchange_rates {
            if !(rate.is_finite() && rate > 0.0) {
                return Err(Error::Config(format!(
                    "exchange rate for {code} must be positive, got {rate}"
                )));
            }
        }
        let w = &self.oecd_weights;
        for (name, v) in [("head", w.head), ("other_adult", w.other_adult), ("child", w.child)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("weight {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    pub fn rate(&self, currency: &str) -> Result<f64> {
        if let Some(&r) = self.exchange_rates.get(currency) {
            Ok(r)
        } else if self.reference_currency.as_deref() == Some(currency) {
            Ok(1.0)
        } else {
            Err(Error::UnknownCurrency(currency.to_string()))
        }
    }

    /// Same config with every conversion, including the implicit reference
    /// rate, multiplied by `factor`.
    pub fn with_rates_scaled(&self, factor: f64) -> Result<Self> {
        let mut out = self.clone();
        for rate in out.exchange_rates.values_mut() {
            *rate *= factor;
        }
        if let Some(reference) = &self.reference_currency {
            out.exchange_rates.entry(reference.clone()).or_insert(factor);
        }
        out.validate()?;
        Ok(out)
    }
}

/// Capital income per equivalent adult, in reference-currency units.
pub fn equivalized_income(r: &HouseholdRecord, cfg: &PipelineConfig) -> Result<f64> {
    let rate = cfg.rate(&r.currency)?;
    Ok(r.capital_income() * rate / cfg.oecd_weights.household_size(r.adults, r.children_under_14))
}

/// Reads records from CSV with a header row, locating fields through `columns`.
pub fn read_records<R: Read>(reader: R, columns: &ColumnMap) -> Result<Vec<HouseholdRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let idx = [
        find(&columns.group)?,
        find(&columns.rental_income)?,
        find(&columns.capital_investment_income)?,
        find(&columns.private_pension_income)?,
        find(&columns.adults)?,
        find(&columns.children_under_14)?,
        find(&columns.currency)?,
    ];
    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let record = i + 1;
        let field = |j: usize| row.get(idx[j]).unwrap_or("");
        let money = |j: usize, name: &str| {
            field(j).parse::<f64>().map_err(|_| Error::InvalidRecord {
                record,
                reason: format!("{name} `{}` is not a number", field(j)),
            })
        };
        let count = |j: usize, name: &str| {
            field(j).parse::<u32>().map_err(|_| Error::InvalidRecord {
                record,
                reason: format!("{name} `{}` is not a non-negative integer", field(j)),
            })
        };
        let r = HouseholdRecord {
            group: field(0).to_string(),
            rental_income: money(1, "rental_income")?,
            capital_investment_income: money(2, "capital_investment_income")?,
            private_pension_income: money(3, "private_pension_income")?,
            adults: count(4, "adults")?,
            children_under_14: count(5, "children_under_14")?,
            currency: field(6).to_string(),
        };
        r.validate(record)?;
        out.push(r);
    }
    Ok(out)
}

pub fn read_records_from_path(path: impl AsRef<Path>, columns: &ColumnMap) -> Result<Vec<HouseholdRecord>> {
    read_records(std::fs::File::open(path)?, columns)
}

/// One group's analysis sample. `sample` is `None` when no income survives
/// the filter.
#[derive(Debug, Clone, PartialEq)]
pub struct Cohort {
    pub n_total: usize,
    pub sample: Option<Sample>,
}

pub fn build_cohorts(
    records: &[HouseholdRecord],
    cfg: &PipelineConfig,
) -> Result<BTreeMap<String, Cohort>> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut incomes: BTreeMap<String, (usize, Vec<f64>)> = BTreeMap::new();
    for r in records {
        let y = equivalized_income(r, cfg)?;
        let entry = incomes.entry(r.group.clone()).or_default();
        entry.0 += 1;
        if !cfg.positive_income_filter || y > 0.0 {
            entry.1.push(y);
        }
    }
    incomes
        .into_iter()
        .map(|(label, (n_total, values))| {
            let sample = if values.is_empty() {
                None
            } else {
                Some(Sample::new(values)?)
            };
            Ok((label, Cohort { n_total, sample }))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortRow {
    pub label: String,
    #[serde(rename = "n_T")]
    pub n_total: usize,
    #[serde(rename = "n_P")]
    pub n_positive: usize,
    pub report: Option<IndexReport>,
    /// Why `report` is missing.
    pub error: Option<String>,
    /// Rank per requested strategy, `None` for rows without a report.
    pub ranks: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortTable {
    pub strategies: Vec<u32>,
    pub rows: Vec<CohortRow>,
    pub diagnostics: Vec<String>,
}

/// Reports every cohort and ranks the ones with defined indices under each
/// strategy in `strategies`. Rank 1 is the smallest index; exactly equal
/// values are ordered by label.
pub fn cohort_reports(
    cohorts: &BTreeMap<String, Cohort>,
    strategies: &[Strategy],
) -> Result<CohortTable> {
    let entries: Vec<(&String, &Cohort)> = cohorts.iter().collect();
    let reports: Vec<Result<IndexReport>> = entries
        .par_iter()
        .map(|(_, c)| match &c.sample {
            Some(s) => IndexReport::compute(s, c.n_total),
            None => Err(Error::EmptySample),
        })
        .collect();

    let mut diagnostics = Vec::new();
    let mut rows: Vec<CohortRow> = entries
        .iter()
        .zip(reports)
        .map(|((label, c), report)| {
            let n_positive = c.sample.as_ref().map_or(0, Sample::len);
            let (report, error) = match report {
                Ok(r) => (Some(r), None),
                Err(Error::EmptySample) => {
                    let msg = "no positive incomes, indices undefined".to_string();
                    diagnostics.push(format!("group {label}: {msg}"));
                    (None, Some(msg))
                }
                Err(e) => {
                    diagnostics.push(format!("group {label}: {e}"));
                    (None, Some(e.to_string()))
                }
            };
            CohortRow {
                label: (*label).clone(),
                n_total: c.n_total,
                n_positive,
                report,
                error,
                ranks: vec![None; strategies.len()],
            }
        })
        .collect();

    let valid: Vec<usize> = (0..rows.len()).filter(|&i| rows[i].report.is_some()).collect();
    if valid.is_empty() {
        return Err(Error::Precondition("no cohort has a valid sample".into()));
    }
    for (col, &k) in strategies.iter().enumerate() {
        let value = |i: usize| rows[i].report.as_ref().map_or(f64::NAN, |r| r.psi(k));
        let mut order = valid.clone();
        order.sort_by(|&a, &b| {
            value(a)
                .total_cmp(&value(b))
                .then_with(|| rows[a].label.cmp(&rows[b].label))
        });
        for (rank, i) in order.into_iter().enumerate() {
            rows[i].ranks[col] = Some(rank + 1);
        }
    }
    Ok(CohortTable {
        strategies: strategies.iter().map(|k| k.index()).collect(),
        rows,
        diagnostics,
    })
}

impl CohortTable {
    pub fn csv_header(&self) -> String {
        let mut h = IndexReport::CSV_HEADER.to_string();
        for k in &self.strategies {
            h.push_str(&format!(",rank{k}"));
        }
        h
    }

    /// Report CSV; undefined values print as `NA`.
    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = self.csv_header();
        out.push('\n');
        for row in &self.rows {
            match &row.report {
                Some(r) => out.push_str(&r.csv_row(&row.label, precision)),
                None => {
                    out.push_str(&format!(
                        "{},NA,NA,{},{}",
                        csv_field(&row.label),
                        row.n_total,
                        row.n_positive
                    ));
                    out.push_str(&",NA".repeat(7));
                }
            }
            for rank in &row.ranks {
                match rank {
                    Some(r) => out.push_str(&format!(",{r}")),
                    None => out.push_str(",NA"),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Aligned plain-text rendering of the same table.
    pub fn to_text(&self, precision: usize) -> String {
        let csv = self.to_csv(precision);
        let cells: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
        let ncol = cells.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..ncol)
            .map(|j| cells.iter().filter_map(|r| r.get(j)).map(|c| c.len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &cells {
            let line: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(j, c)| if j == 0 { format!("{c:<w$}", w = widths[j]) } else { format!("{c:>w$}", w = widths[j]) })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Reads, groups and reports in one call.
pub fn run_pipeline<R: Read>(
    data: R,
    cfg: &PipelineConfig,
    strategies: &[Strategy],
) -> Result<CohortTable> {
    let records = read_records(data, &cfg.columns)?;
    let cohorts = build_cohorts(&records, cfg)?;
    cohort_reports(&cohorts, strategies)
}
