//! Relative efficiency benchmarking of mutual funds.
//!
//! The crate computes classical performance metrics from monthly return
//! series, assembles them into input/output scenarios, and scores every fund
//! against its peers by solving one small linear program per fund under the
//! CCR (constant returns to scale) and BCC (variable returns to scale)
//! envelopment models. Reports cover scores, ranks, frontier projections,
//! cross-scenario efficiency classes, and crosstabs against external agency
//! rankings.
//!
//! Module map:
//!
//! - [`lp`] — dense two-phase simplex solver, no domain knowledge
//! - [`metrics`] — Sharpe, Sortino, beta, alpha, information ratio, VaR, ...
//! - [`dea`] — multiplier/envelopment model construction, scores, ranks
//! - [`scenario`] — named input/output variable selections and the
//!   information-ratio standardization
//! - [`data_io`] — CSV ingestion, universe filters, external rank joins
//! - [`report`] — tables, efficiency classification, rank crosstabs

pub mod data_io;
pub mod dea;
pub mod lp;
pub mod metrics;
pub mod report;
pub mod scenario;

pub use data_io::{DmuRecord, FilterPolicy};
pub use dea::{DeaConfig, DeaDataset, EfficiencyResult, Orientation, Rts};
pub use lp::{LinearProgram, LpSolution, LpStatus};
pub use metrics::{MarketContext, MetricSet, ReturnSeries};
pub use report::{EfficiencyClass, RankCrosstab};
pub use scenario::{builtin_scenarios, ScenarioSpec};
