//! CSV ingestion, fund-universe filtering, and external rank joins.
//!
//! Two ingestion paths exist. Schema A carries precomputed metrics (one row
//! per fund, blank cells allowed) and mirrors the shape of published result
//! tables. Schema B carries raw monthly NAVs (`name,date,nav` for funds,
//! `date,nav` for the benchmark) from which the metrics module computes
//! everything. Ranks (`name,rank`) and cost proxies
//! (`name,expense_ratio,exit_load`) join onto records by fund name after
//! whitespace normalization and case folding; fuzzy matching is deliberately
//! not attempted.

use crate::metrics::{MarketContext, MetricSet, ReturnSeries};
use chrono::NaiveDate;
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Exact Schema A column list, in order.
pub const SCHEMA_A_HEADER: [&str; 17] = [
    "name",
    "category",
    "sub_category",
    "corpus_crore",
    "inception_date",
    "expected_return",
    "beta",
    "std_dev",
    "downside_prob",
    "var_pct",
    "expense_ratio",
    "exit_load",
    "sharpe",
    "treynor",
    "sortino",
    "jensen_alpha",
    "information_ratio",
];

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}:{line} column '{column}': {reason}")]
    Parse {
        path: String,
        line: u64,
        column: String,
        reason: String,
    },
    #[error("duplicate fund '{0}'")]
    DuplicateFund(String),
    #[error("dates for fund '{0}' are not strictly increasing")]
    NonMonotonicDates(String),
    #[error("rank {rank} for '{name}' outside 1..=5")]
    RankOutOfRange { name: String, rank: i64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// One fund: identity, static attributes, metric values, optional agency
/// rank. Attribute cells may be blank in Schema A files, hence the options.
#[derive(Debug, Clone, PartialEq)]
pub struct DmuRecord {
    pub name: String,
    pub category: String,
    pub sub_category: String,
    pub corpus_crore: Option<f64>,
    pub inception_date: Option<NaiveDate>,
    pub metrics: MetricSet,
    pub external_rank: Option<u8>,
}

/// Universe gates applied before any benchmarking run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FilterPolicy {
    pub min_corpus: f64,
    pub inception_cutoff: NaiveDate,
    pub require_complete: bool,
}

impl Default for FilterPolicy {
    fn default() -> Self {
        Self {
            min_corpus: 500.0,
            inception_cutoff: NaiveDate::from_ymd_opt(2017, 6, 29).expect("valid date"),
            require_complete: true,
        }
    }
}

/// Machine-readable reason a record was dropped.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub enum DropReason {
    MinCorpus { corpus: f64 },
    InceptionCutoff { inception: NaiveDate },
    Incomplete { field: String },
}

impl std::fmt::Display for DropReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DropReason::MinCorpus { corpus } => write!(f, "corpus {corpus} below minimum"),
            DropReason::InceptionCutoff { inception } => {
                write!(f, "incepted {inception}, after the cutoff")
            }
            DropReason::Incomplete { field } => write!(f, "missing metric '{field}'"),
        }
    }
}

/// Outcome of [`apply_filters`]: kept and dropped partition the input.
#[derive(Debug, Clone)]
pub struct FilterOutcome {
    pub kept: Vec<DmuRecord>,
    pub dropped: Vec<(DmuRecord, DropReason)>,
    pub as_of: NaiveDate,
}

/// Canonical form used for name joins: case-folded, whitespace collapsed.
pub fn normalize_name(name: &str) -> String {
    name.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn parse_err(path: &str, line: u64, column: &str, reason: impl Into<String>) -> DataError {
    DataError::Parse {
        path: path.to_string(),
        line,
        column: column.to_string(),
        reason: reason.into(),
    }
}

fn opt_f64(path: &str, line: u64, column: &str, cell: &str) -> Result<Option<f64>, DataError> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(None);
    }
    cell.parse::<f64>()
        .map(Some)
        .map_err(|e| parse_err(path, line, column, format!("bad decimal '{cell}': {e}")))
}

fn opt_date(path: &str, line: u64, column: &str, cell: &str) -> Result<Option<NaiveDate>, DataError> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(None);
    }
    NaiveDate::parse_from_str(cell, "%Y-%m-%d")
        .map(Some)
        .map_err(|e| parse_err(path, line, column, format!("bad ISO date '{cell}': {e}")))
}

fn open_reader(path: &Path) -> Result<csv::Reader<std::fs::File>, DataError> {
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?)
}

fn check_header(
    path: &str,
    reader: &mut csv::Reader<std::fs::File>,
    expected: &[&str],
) -> Result<(), DataError> {
    let header = reader.headers()?.clone();
    let got: Vec<&str> = header.iter().collect();
    if got != expected {
        return Err(parse_err(
            path,
            1,
            "header",
            format!("expected columns {expected:?}, found {got:?}"),
        ));
    }
    Ok(())
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

/// Loads a Schema A metric table. Blank cells become missing fields; a
/// repeated fund name (after normalization) is an error.
pub fn load_metric_table(path: impl AsRef<Path>) -> Result<Vec<DmuRecord>, DataError> {
    let path_str = path.as_ref().display().to_string();
    let mut reader = open_reader(path.as_ref())?;
    check_header(&path_str, &mut reader, &SCHEMA_A_HEADER)?;

    let mut seen = std::collections::BTreeSet::new();
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = record_line(&row);
        let cell = |idx: usize| row.get(idx).unwrap_or("");
        let name = cell(0).to_string();
        if name.is_empty() {
            return Err(parse_err(&path_str, line, "name", "fund name is empty"));
        }
        if !seen.insert(normalize_name(&name)) {
            return Err(DataError::DuplicateFund(name));
        }

        let corpus = opt_f64(&path_str, line, "corpus_crore", cell(3))?;
        if let Some(c) = corpus {
            if c < 0.0 || !c.is_finite() {
                return Err(parse_err(
                    &path_str,
                    line,
                    "corpus_crore",
                    format!("corpus must be a finite nonnegative amount, got {c}"),
                ));
            }
        }

        let metrics = MetricSet {
            expected_return: opt_f64(&path_str, line, "expected_return", cell(5))?,
            beta: opt_f64(&path_str, line, "beta", cell(6))?,
            std_dev: opt_f64(&path_str, line, "std_dev", cell(7))?,
            downside_probability: opt_f64(&path_str, line, "downside_prob", cell(8))?,
            var_pct_corpus: opt_f64(&path_str, line, "var_pct", cell(9))?,
            expense_ratio: opt_f64(&path_str, line, "expense_ratio", cell(10))?,
            exit_load: opt_f64(&path_str, line, "exit_load", cell(11))?,
            sharpe: opt_f64(&path_str, line, "sharpe", cell(12))?,
            treynor: opt_f64(&path_str, line, "treynor", cell(13))?,
            sortino: opt_f64(&path_str, line, "sortino", cell(14))?,
            jensen_alpha: opt_f64(&path_str, line, "jensen_alpha", cell(15))?,
            information_ratio: opt_f64(&path_str, line, "information_ratio", cell(16))?,
            ..MetricSet::default()
        };

        records.push(DmuRecord {
            name,
            category: cell(1).to_string(),
            sub_category: cell(2).to_string(),
            corpus_crore: corpus,
            inception_date: opt_date(&path_str, line, "inception_date", cell(4))?,
            metrics,
            external_rank: None,
        });
    }
    Ok(records)
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

/// Writes records back out as Schema A. Loading the result reproduces the
/// records field for field (ranks are not part of the schema).
pub fn save_metric_table(path: impl AsRef<Path>, records: &[DmuRecord]) -> Result<(), DataError> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    writer.write_record(SCHEMA_A_HEADER)?;
    for r in records {
        let m = &r.metrics;
        writer.write_record(&[
            r.name.clone(),
            r.category.clone(),
            r.sub_category.clone(),
            fmt_opt_f64(r.corpus_crore),
            r.inception_date.map(|d| d.to_string()).unwrap_or_default(),
            fmt_opt_f64(m.expected_return),
            fmt_opt_f64(m.beta),
            fmt_opt_f64(m.std_dev),
            fmt_opt_f64(m.downside_probability),
            fmt_opt_f64(m.var_pct_corpus),
            fmt_opt_f64(m.expense_ratio),
            fmt_opt_f64(m.exit_load),
            fmt_opt_f64(m.sharpe),
            fmt_opt_f64(m.treynor),
            fmt_opt_f64(m.sortino),
            fmt_opt_f64(m.jensen_alpha),
            fmt_opt_f64(m.information_ratio),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

fn navs_to_series(
    fund: &str,
    navs: &[(NaiveDate, f64)],
) -> Result<ReturnSeries, DataError> {
    if navs.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(DataError::NonMonotonicDates(fund.to_string()));
    }
    let returns: Vec<(NaiveDate, f64)> = navs
        .windows(2)
        .map(|w| (w[1].0, w[1].1 / w[0].1 - 1.0))
        .collect();
    ReturnSeries::new(fund, returns).map_err(|e| match e {
        crate::metrics::MetricError::NonMonotonicDates => {
            DataError::NonMonotonicDates(fund.to_string())
        }
        other => DataError::Parse {
            path: String::new(),
            line: 0,
            column: "nav".into(),
            reason: other.to_string(),
        },
    })
}

fn read_nav_rows(
    path: &Path,
    named: bool,
) -> Result<Vec<(String, NaiveDate, f64)>, DataError> {
    let path_str = path.display().to_string();
    let mut reader = open_reader(path)?;
    let expected: &[&str] = if named {
        &["name", "date", "nav"]
    } else {
        &["date", "nav"]
    };
    check_header(&path_str, &mut reader, expected)?;
    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = record_line(&row);
        let (name, date_cell, nav_cell) = if named {
            (
                row.get(0).unwrap_or("").to_string(),
                row.get(1).unwrap_or(""),
                row.get(2).unwrap_or(""),
            )
        } else {
            (
                String::new(),
                row.get(0).unwrap_or(""),
                row.get(1).unwrap_or(""),
            )
        };
        let date = opt_date(&path_str, line, "date", date_cell)?
            .ok_or_else(|| parse_err(&path_str, line, "date", "date is empty"))?;
        let nav = opt_f64(&path_str, line, "nav", nav_cell)?
            .ok_or_else(|| parse_err(&path_str, line, "nav", "nav is empty"))?;
        if nav <= 0.0 {
            return Err(parse_err(
                &path_str,
                line,
                "nav",
                format!("nav must be positive, got {nav}"),
            ));
        }
        if named && name.is_empty() {
            return Err(parse_err(&path_str, line, "name", "fund name is empty"));
        }
        rows.push((name, date, nav));
    }
    Ok(rows)
}

/// Loads monthly NAV panels and converts them to return series: k NAVs give
/// k-1 returns via nav_t / nav_{t-1} - 1. The market context carries the
/// documented defaults; callers override rates from their configuration.
pub fn load_return_panel(
    fund_path: impl AsRef<Path>,
    benchmark_path: impl AsRef<Path>,
) -> Result<(Vec<ReturnSeries>, MarketContext), DataError> {
    let fund_rows = read_nav_rows(fund_path.as_ref(), true)?;

    // Group by fund, keeping the order of first appearance.
    let mut order: Vec<String> = Vec::new();
    let mut by_fund: BTreeMap<String, Vec<(NaiveDate, f64)>> = BTreeMap::new();
    for (name, date, nav) in fund_rows {
        if !by_fund.contains_key(&name) {
            order.push(name.clone());
        }
        by_fund.entry(name).or_default().push((date, nav));
    }
    let mut series = Vec::with_capacity(order.len());
    for name in &order {
        series.push(navs_to_series(name, &by_fund[name])?);
    }

    let bench_rows = read_nav_rows(benchmark_path.as_ref(), false)?;
    let navs: Vec<(NaiveDate, f64)> = bench_rows.into_iter().map(|(_, d, v)| (d, v)).collect();
    let benchmark = navs_to_series("benchmark", &navs)?;
    Ok((series, MarketContext::new(benchmark)))
}

/// Applies the universe gates. A record is dropped for low corpus, late
/// inception, or (when the policy requires completeness) a missing metric
/// among `required_fields` — checked in that order, first hit wins. Gates
/// whose attribute is absent from the record pass rather than guess.
pub fn apply_filters(
    records: Vec<DmuRecord>,
    policy: &FilterPolicy,
    as_of: NaiveDate,
    required_fields: &[String],
) -> FilterOutcome {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    'records: for record in records {
        if let Some(corpus) = record.corpus_crore {
            if corpus < policy.min_corpus {
                dropped.push((record, DropReason::MinCorpus { corpus }));
                continue;
            }
        }
        if let Some(inception) = record.inception_date {
            if inception > policy.inception_cutoff {
                dropped.push((record, DropReason::InceptionCutoff { inception }));
                continue;
            }
        }
        if policy.require_complete {
            for field in required_fields {
                let missing = matches!(record.metrics.get(field), Some(None) | None);
                if missing {
                    dropped.push((
                        record,
                        DropReason::Incomplete {
                            field: field.clone(),
                        },
                    ));
                    continue 'records;
                }
            }
        }
        kept.push(record);
    }
    FilterOutcome {
        kept,
        dropped,
        as_of,
    }
}

/// Rank rows that failed to join, with the joined record set.
#[derive(Debug, Clone)]
pub struct RankJoin {
    pub records: Vec<DmuRecord>,
    /// Names present in the ranks file with no matching fund.
    pub unmatched: Vec<String>,
}

/// Joins a `name,rank` file onto the records. Unmatched rank rows are
/// reported back; funds without a rank row keep `external_rank` absent.
pub fn join_external_ranks(
    mut records: Vec<DmuRecord>,
    ranks_path: impl AsRef<Path>,
) -> Result<RankJoin, DataError> {
    let path_str = ranks_path.as_ref().display().to_string();
    let mut reader = open_reader(ranks_path.as_ref())?;
    check_header(&path_str, &mut reader, &["name", "rank"])?;

    let mut by_name: BTreeMap<String, i64> = BTreeMap::new();
    let mut file_order: Vec<(String, String)> = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = record_line(&row);
        let name = row.get(0).unwrap_or("").to_string();
        let rank: i64 = row
            .get(1)
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|e| parse_err(&path_str, line, "rank", format!("bad rank: {e}")))?;
        if !(1..=5).contains(&rank) {
            return Err(DataError::RankOutOfRange { name, rank });
        }
        let key = normalize_name(&name);
        file_order.push((key.clone(), name));
        by_name.insert(key, rank);
    }

    let mut matched = std::collections::BTreeSet::new();
    for record in records.iter_mut() {
        let key = normalize_name(&record.name);
        if let Some(rank) = by_name.get(&key) {
            record.external_rank = Some(*rank as u8);
            matched.insert(key);
        }
    }
    let unmatched = file_order
        .into_iter()
        .filter(|(key, _)| !matched.contains(key))
        .map(|(_, original)| original)
        .collect();
    Ok(RankJoin { records, unmatched })
}

/// Joins a `name,expense_ratio,exit_load` file onto the records, filling the
/// cost proxies that raw NAV panels cannot provide. Same matching rule as
/// the rank join.
pub fn join_costs(
    mut records: Vec<DmuRecord>,
    costs_path: impl AsRef<Path>,
) -> Result<(Vec<DmuRecord>, Vec<String>), DataError> {
    let path_str = costs_path.as_ref().display().to_string();
    let mut reader = open_reader(costs_path.as_ref())?;
    check_header(&path_str, &mut reader, &["name", "expense_ratio", "exit_load"])?;

    let mut by_name: BTreeMap<String, (Option<f64>, Option<f64>)> = BTreeMap::new();
    let mut file_order: Vec<(String, String)> = Vec::new();
    for row in reader.records() {
        let row = row?;
        let line = record_line(&row);
        let name = row.get(0).unwrap_or("").to_string();
        let expense = opt_f64(&path_str, line, "expense_ratio", row.get(1).unwrap_or(""))?;
        let exit = opt_f64(&path_str, line, "exit_load", row.get(2).unwrap_or(""))?;
        for (label, v) in [("expense_ratio", expense), ("exit_load", exit)] {
            if let Some(x) = v {
                if x < 0.0 {
                    return Err(parse_err(
                        &path_str,
                        line,
                        label,
                        format!("must be nonnegative, got {x}"),
                    ));
                }
            }
        }
        let key = normalize_name(&name);
        file_order.push((key.clone(), name));
        by_name.insert(key, (expense, exit));
    }

    let mut matched = std::collections::BTreeSet::new();
    for record in records.iter_mut() {
        let key = normalize_name(&record.name);
        if let Some((expense, exit)) = by_name.get(&key) {
            record.metrics.expense_ratio = *expense;
            record.metrics.exit_load = *exit;
            matched.insert(key);
        }
    }
    let unmatched = file_order
        .into_iter()
        .filter(|(key, _)| !matched.contains(key))
        .map(|(_, original)| original)
        .collect();
    Ok((records, unmatched))
}
