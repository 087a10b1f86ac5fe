//! Median-based income inequality indices.
//!
//! The indices compare the median income of the poorer half of a population
//! with the median of the whole population (Ψ₁), of the non-poor half (Ψ₂)
//! or with the matching quantile of the rich (Ψ₃). This crate evaluates them
//! for parametric quantile models and for empirical samples, studies how
//! rank-preserving transfers move them, and runs a survey-style pipeline that
//! reports and ranks cohorts.

pub mod curves;
pub mod error;
pub mod format;
pub mod indices;
pub mod pipeline;
pub mod quadrature;
pub mod quantile;
pub mod sample;
pub mod transfer;

pub use curves::{
    curve_samples, index_table, psi, psi_index, rank_values, reference_catalog, CurveSamples,
    IndexTableRow, RankRange, Strategy,
};
pub use error::{Error, Result};
pub use indices::{dg_n, full_report, g2_n, gini_n, psi_all, psi_n, zenga_n, IndexReport};
pub use pipeline::{
    build_cohorts, cohort_reports, equivalized_income, read_records, CohortTable, HouseholdRecord,
    PipelineConfig,
};
pub use quadrature::QuadratureConfig;
pub use quantile::{Family, QuantileModel};
pub use sample::Sample;
pub use transfer::{
    apply_transfer, classify, evaluate_transfer, max_admissible, predict_effect, run_plan,
    threshold_c2, threshold_c3, Direction, Standing, Transfer, TransferOutcome, TransferPlan,
};
