//! Result rendering: per-scenario efficiency tables, cross-scenario
//! efficiency classification, and the crosstab of efficiency against
//! external agency ranks.

use crate::data_io::DmuRecord;
use crate::dea::{self, EfficiencyResult};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("scenarios cover different unit sets: {0}")]
    InconsistentDmuSets(String),
    #[error("no record carries an external rank")]
    NoRankedFunds,
    #[error("bad table json: {0}")]
    BadJson(String),
}

/// Score at or above `1 - tolerance` counts as efficient.
pub const EFFICIENCY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassLabel {
    /// Efficient in every scenario.
    EfficientAll,
    /// Efficient in every information-ratio scenario, in no base scenario.
    EfficientIrOnly,
    /// Efficient in every base scenario, in no information-ratio scenario.
    EfficientBaseOnly,
    /// Efficient somewhere, but fitting no clean pattern.
    Mixed,
    NeverEfficient,
}

impl std::fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ClassLabel::EfficientAll => "efficient-all",
            ClassLabel::EfficientIrOnly => "efficient-ir-only",
            ClassLabel::EfficientBaseOnly => "efficient-base-only",
            ClassLabel::Mixed => "mixed",
            ClassLabel::NeverEfficient => "never-efficient",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyClass {
    pub dmu_id: String,
    pub class: ClassLabel,
    pub per_scenario_flags: BTreeMap<String, bool>,
}

/// One scenario's results plus whether it belongs to the information-ratio
/// side of the partition.
#[derive(Debug, Clone)]
pub struct ScenarioResults {
    pub scenario_name: String,
    pub ir_scenario: bool,
    pub results: Vec<EfficiencyResult>,
}

/// Buckets every unit by where it reaches the frontier. The unit order of
/// the first scenario is preserved.
pub fn classify(
    by_scenario: &[ScenarioResults],
    tolerance: f64,
) -> Result<Vec<EfficiencyClass>, ReportError> {
    let first = by_scenario
        .first()
        .ok_or_else(|| ReportError::InconsistentDmuSets("no scenarios given".into()))?;
    let order: Vec<&str> = first.results.iter().map(|r| r.dmu_id.as_str()).collect();

    let mut flags: BTreeMap<&str, BTreeMap<String, bool>> = BTreeMap::new();
    for scenario in by_scenario {
        if scenario.results.len() != order.len() {
            return Err(ReportError::InconsistentDmuSets(format!(
                "'{}' has {} units, '{}' has {}",
                first.scenario_name,
                order.len(),
                scenario.scenario_name,
                scenario.results.len()
            )));
        }
        for r in &scenario.results {
            if !order.contains(&r.dmu_id.as_str()) {
                return Err(ReportError::InconsistentDmuSets(format!(
                    "'{}' appears in '{}' only",
                    r.dmu_id, scenario.scenario_name
                )));
            }
            flags
                .entry(
                    order
                        .iter()
                        .find(|id| **id == r.dmu_id.as_str())
                        .expect("checked above"),
                )
                .or_default()
                .insert(scenario.scenario_name.clone(), r.score >= 1.0 - tolerance);
        }
    }

    let base: Vec<&str> = by_scenario
        .iter()
        .filter(|s| !s.ir_scenario)
        .map(|s| s.scenario_name.as_str())
        .collect();
    let ir: Vec<&str> = by_scenario
        .iter()
        .filter(|s| s.ir_scenario)
        .map(|s| s.scenario_name.as_str())
        .collect();

    let classes = order
        .iter()
        .map(|dmu_id| {
            let per = &flags[dmu_id];
            let all = per.values().all(|f| *f);
            let none = per.values().all(|f| !*f);
            let base_all = !base.is_empty() && base.iter().all(|s| per[*s]);
            let base_none = base.iter().all(|s| !per[*s]);
            let ir_all = !ir.is_empty() && ir.iter().all(|s| per[*s]);
            let ir_none = ir.iter().all(|s| !per[*s]);
            let class = if all {
                ClassLabel::EfficientAll
            } else if none {
                ClassLabel::NeverEfficient
            } else if ir_all && base_none {
                ClassLabel::EfficientIrOnly
            } else if base_all && ir_none {
                ClassLabel::EfficientBaseOnly
            } else {
                ClassLabel::Mixed
            };
            EfficiencyClass {
                dmu_id: dmu_id.to_string(),
                class,
                per_scenario_flags: per.clone(),
            }
        })
        .collect();
    Ok(classes)
}

/// Which flag pattern counts a fund as "efficient" in rank crosstabs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EfficiencyRule {
    AnyScenario,
    AllScenarios,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrosstabRow {
    pub rank: u8,
    pub total: usize,
    pub efficient: usize,
    pub inefficient: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankCrosstab {
    pub rows: Vec<CrosstabRow>,
    pub total: CrosstabRow,
    /// Funds that carried no external rank (excluded from the rows).
    pub unranked: usize,
}

/// Groups ranked funds by external rank 1..=5 and counts how many are
/// efficient under `rule`. Unranked funds are excluded and counted apart.
pub fn crosstab(
    records: &[DmuRecord],
    classes: &[EfficiencyClass],
    rule: EfficiencyRule,
) -> Result<RankCrosstab, ReportError> {
    let by_id: BTreeMap<&str, &EfficiencyClass> = classes
        .iter()
        .map(|c| (c.dmu_id.as_str(), c))
        .collect();

    let mut rows: Vec<CrosstabRow> = (1..=5)
        .map(|rank| CrosstabRow {
            rank,
            total: 0,
            efficient: 0,
            inefficient: 0,
        })
        .collect();
    let mut unranked = 0usize;
    let mut any_ranked = false;
    for record in records {
        let Some(rank) = record.external_rank else {
            unranked += 1;
            continue;
        };
        any_ranked = true;
        let class = by_id.get(record.name.as_str()).ok_or_else(|| {
            ReportError::InconsistentDmuSets(format!("'{}' has no classification", record.name))
        })?;
        let efficient = match rule {
            EfficiencyRule::AnyScenario => class.per_scenario_flags.values().any(|f| *f),
            EfficiencyRule::AllScenarios => class.per_scenario_flags.values().all(|f| *f),
        };
        let row = &mut rows[(rank - 1) as usize];
        row.total += 1;
        if efficient {
            row.efficient += 1;
        } else {
            row.inefficient += 1;
        }
    }
    if !any_ranked {
        return Err(ReportError::NoRankedFunds);
    }
    let total = CrosstabRow {
        rank: 0,
        total: rows.iter().map(|r| r.total).sum(),
        efficient: rows.iter().map(|r| r.efficient).sum(),
        inefficient: rows.iter().map(|r| r.inefficient).sum(),
    };
    Ok(RankCrosstab {
        rows,
        total,
        unranked,
    })
}

// ---------------------------------------------------------------------------
// Tables and rendering
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    /// Rendered at full precision.
    Float(f64),
    /// Efficiency-style value, rendered to 4 decimal places in text formats.
    Score(f64),
    Int(i64),
    Empty,
}

impl Cell {
    fn text_form(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Float(v) => format!("{v}"),
            Cell::Score(v) => format!("{v:.4}"),
            Cell::Int(v) => format!("{v}"),
            Cell::Empty => String::new(),
        }
    }

    fn json_form(&self) -> serde_json::Value {
        match self {
            Cell::Text(s) => serde_json::Value::String(s.clone()),
            Cell::Float(v) | Cell::Score(v) => serde_json::json!(v),
            Cell::Int(v) => serde_json::json!(v),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Markdown,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Markdown => "md",
            Format::Json => "json",
        }
    }
}

fn escape_pipes(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Renders a table without any header block. Column order is exactly
/// `table.columns`; efficiency scores print to 4 decimal places in the text
/// formats and at full precision in json.
pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
            w.write_record(&table.columns).expect("in-memory write");
            for row in &table.rows {
                let cells: Vec<String> = row.iter().map(Cell::text_form).collect();
                w.write_record(&cells).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("flushed")).expect("utf8")
        }
        Format::Markdown => {
            let mut out = String::new();
            let head: Vec<String> = table.columns.iter().map(|c| escape_pipes(c)).collect();
            let _ = writeln!(out, "| {} |", head.join(" | "));
            let _ = writeln!(
                out,
                "|{}|",
                table.columns.iter().map(|_| " --- ").collect::<Vec<_>>().join("|")
            );
            for row in &table.rows {
                let cells: Vec<String> =
                    row.iter().map(|c| escape_pipes(&c.text_form())).collect();
                let _ = writeln!(out, "| {} |", cells.join(" | "));
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|row| {
                    let obj: serde_json::Map<String, serde_json::Value> = table
                        .columns
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json_form))
                        .collect();
                    serde_json::Value::Object(obj)
                })
                .collect();
            let doc = serde_json::json!({ "columns": table.columns, "rows": rows });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

/// Parses a table rendered as csv (skipping `#` comment lines) or json.
/// Numeric cells come back as floats, everything else as text.
pub fn parse(text: &str, format: Format) -> Result<Table, ReportError> {
    match format {
        Format::Csv => {
            let mut reader = csv::ReaderBuilder::new()
                .comment(Some(b'#'))
                .from_reader(text.as_bytes());
            let columns: Vec<String> = reader
                .headers()
                .map_err(|e| ReportError::BadJson(e.to_string()))?
                .iter()
                .map(|s| s.to_string())
                .collect();
            let mut table = Table::new(columns);
            for row in reader.records() {
                let row = row.map_err(|e| ReportError::BadJson(e.to_string()))?;
                table.push(
                    row.iter()
                        .map(|cell| {
                            if cell.is_empty() {
                                return Cell::Empty;
                            }
                            // Keep a cell numeric only when the canonical
                            // float rendering reproduces it; anything else
                            // (e.g. "1.0000") stays textual so that
                            // parse-then-render is a fixed point.
                            match cell.parse::<f64>() {
                                Ok(v) if format!("{v}") == cell => Cell::Float(v),
                                _ => Cell::Text(cell.to_string()),
                            }
                        })
                        .collect(),
                );
            }
            Ok(table)
        }
        Format::Json => {
            let doc: serde_json::Value =
                serde_json::from_str(text).map_err(|e| ReportError::BadJson(e.to_string()))?;
            let columns: Vec<String> = doc["columns"]
                .as_array()
                .ok_or_else(|| ReportError::BadJson("missing columns".into()))?
                .iter()
                .map(|v| v.as_str().unwrap_or_default().to_string())
                .collect();
            let mut table = Table::new(columns.clone());
            for row in doc["rows"]
                .as_array()
                .ok_or_else(|| ReportError::BadJson("missing rows".into()))?
            {
                table.push(
                    columns
                        .iter()
                        .map(|c| match &row[c] {
                            serde_json::Value::Null => Cell::Empty,
                            serde_json::Value::Number(n) => {
                                Cell::Float(n.as_f64().unwrap_or(f64::NAN))
                            }
                            serde_json::Value::String(s) => Cell::Text(s.clone()),
                            other => Cell::Text(other.to_string()),
                        })
                        .collect(),
                );
            }
            Ok(table)
        }
        Format::Markdown => Err(ReportError::BadJson(
            "markdown is a write-only format".into(),
        )),
    }
}

/// Ordered key/value pairs describing the run, embedded atop every report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunHeader {
    pub entries: Vec<(String, String)>,
}

impl RunHeader {
    pub fn push(&mut self, key: impl Into<String>, value: impl std::fmt::Display) {
        self.entries.push((key.into(), value.to_string()));
    }
}

/// Renders a report: the run-configuration header block followed by the
/// table. The header uses `#` comment lines in csv, a list in markdown, and
/// a `run` object in json.
pub fn write_report(header: &RunHeader, table: &Table, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            for (k, v) in &header.entries {
                let _ = writeln!(out, "# {k}: {v}");
            }
            out.push_str(&render(table, format));
            out
        }
        Format::Markdown => {
            let mut out = String::new();
            for (k, v) in &header.entries {
                let _ = writeln!(out, "- **{k}:** {v}");
            }
            out.push('\n');
            out.push_str(&render(table, format));
            out
        }
        Format::Json => {
            let run: serde_json::Map<String, serde_json::Value> = header
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect();
            let body: serde_json::Value =
                serde_json::from_str(&render(table, format)).expect("own output");
            let doc = serde_json::json!({
                "run": run,
                "columns": body["columns"],
                "rows": body["rows"],
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
            s.push('\n');
            s
        }
    }
}

// ---------------------------------------------------------------------------
// Table builders
// ---------------------------------------------------------------------------

/// Score/rank table for one scenario, ordered by rank.
pub fn efficiency_table(results: &[EfficiencyResult]) -> Table {
    let ranks = dea::rank(results);
    let by_id: BTreeMap<&str, &EfficiencyResult> =
        results.iter().map(|r| (r.dmu_id.as_str(), r)).collect();
    let mut table = Table::new(
        ["name", "rank", "efficiency", "reference_set"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    for (dmu_id, rank) in &ranks {
        let r = by_id[dmu_id.as_str()];
        let peers = r
            .reference_set
            .iter()
            .map(|(id, l)| format!("{id}:{l:.4}"))
            .collect::<Vec<_>>()
            .join("; ");
        table.push(vec![
            Cell::Text(dmu_id.clone()),
            Cell::Int(*rank as i64),
            Cell::Score(r.score),
            Cell::Text(peers),
        ]);
    }
    table
}

/// Side-by-side rank/efficiency columns for several scenarios over one peer
/// set, mirroring the published result layout. Rows follow the unit order
/// of the first scenario.
pub fn summary_table(by_scenario: &[ScenarioResults]) -> Table {
    let mut columns = vec!["name".to_string()];
    for s in by_scenario {
        columns.push(format!("{} rank", s.scenario_name));
        columns.push(format!("{} efficiency", s.scenario_name));
    }
    let mut table = Table::new(columns);
    let Some(first) = by_scenario.first() else {
        return table;
    };
    let ranks: Vec<BTreeMap<String, usize>> = by_scenario
        .iter()
        .map(|s| dea::rank(&s.results).into_iter().collect())
        .collect();
    let scores: Vec<BTreeMap<&str, f64>> = by_scenario
        .iter()
        .map(|s| s.results.iter().map(|r| (r.dmu_id.as_str(), r.score)).collect())
        .collect();
    for r in &first.results {
        let mut row = vec![Cell::Text(r.dmu_id.clone())];
        for (rk, sc) in ranks.iter().zip(&scores) {
            match (rk.get(&r.dmu_id), sc.get(r.dmu_id.as_str())) {
                (Some(rank), Some(score)) => {
                    row.push(Cell::Int(*rank as i64));
                    row.push(Cell::Score(*score));
                }
                _ => {
                    row.push(Cell::Empty);
                    row.push(Cell::Empty);
                }
            }
        }
        table.push(row);
    }
    table
}

pub fn classification_table(classes: &[EfficiencyClass]) -> Table {
    let scenario_names: Vec<String> = classes
        .first()
        .map(|c| c.per_scenario_flags.keys().cloned().collect())
        .unwrap_or_default();
    let mut columns = vec!["name".to_string(), "class".to_string()];
    columns.extend(scenario_names.iter().map(|s| format!("efficient in {s}")));
    let mut table = Table::new(columns);
    for c in classes {
        let mut row = vec![
            Cell::Text(c.dmu_id.clone()),
            Cell::Text(c.class.to_string()),
        ];
        for s in &scenario_names {
            row.push(Cell::Text(
                c.per_scenario_flags
                    .get(s)
                    .map(|f| if *f { "yes" } else { "no" })
                    .unwrap_or("")
                    .to_string(),
            ));
        }
        table.push(row);
    }
    table
}

pub fn crosstab_table(xtab: &RankCrosstab) -> Table {
    let mut table = Table::new(
        ["external_rank", "funds", "efficient", "inefficient"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    for row in &xtab.rows {
        table.push(vec![
            Cell::Int(row.rank as i64),
            Cell::Int(row.total as i64),
            Cell::Int(row.efficient as i64),
            Cell::Int(row.inefficient as i64),
        ]);
    }
    table.push(vec![
        Cell::Text("total".into()),
        Cell::Int(xtab.total.total as i64),
        Cell::Int(xtab.total.efficient as i64),
        Cell::Int(xtab.total.inefficient as i64),
    ]);
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MetricSet;

    fn result(id: &str, score: f64, scenario: &str) -> EfficiencyResult {
        EfficiencyResult {
            dmu_id: id.into(),
            score,
            input_weights: vec![],
            output_weights: vec![],
            reference_set: vec![],
            projection_inputs: vec![],
            projection_outputs: vec![],
            scenario_name: scenario.into(),
        }
    }

    fn scenario(name: &str, ir: bool, scores: &[(&str, f64)]) -> ScenarioResults {
        ScenarioResults {
            scenario_name: name.into(),
            ir_scenario: ir,
            results: scores.iter().map(|(id, s)| result(id, *s, name)).collect(),
        }
    }

    #[test]
    fn classify_patterns() {
        let scenarios = vec![
            scenario("base1", false, &[("a", 1.0), ("b", 0.8), ("c", 1.0), ("d", 0.7), ("e", 1.0)]),
            scenario("base2", false, &[("a", 1.0), ("b", 0.9), ("c", 1.0), ("d", 0.6), ("e", 0.5)]),
            scenario("ir1", true, &[("a", 1.0), ("b", 1.0), ("c", 0.9), ("d", 0.8), ("e", 1.0)]),
            scenario("ir2", true, &[("a", 1.0), ("b", 1.0), ("c", 0.8), ("d", 0.9), ("e", 1.0)]),
        ];
        let classes = classify(&scenarios, EFFICIENCY_TOL).unwrap();
        let by_id: BTreeMap<&str, ClassLabel> = classes
            .iter()
            .map(|c| (c.dmu_id.as_str(), c.class))
            .collect();
        assert_eq!(by_id["a"], ClassLabel::EfficientAll);
        assert_eq!(by_id["b"], ClassLabel::EfficientIrOnly);
        assert_eq!(by_id["c"], ClassLabel::EfficientBaseOnly);
        assert_eq!(by_id["d"], ClassLabel::NeverEfficient);
        assert_eq!(by_id["e"], ClassLabel::Mixed);
    }

    #[test]
    fn classify_rejects_mismatched_unit_sets() {
        let scenarios = vec![
            scenario("s1", false, &[("a", 1.0), ("b", 0.8)]),
            scenario("s2", false, &[("a", 1.0)]),
        ];
        assert!(matches!(
            classify(&scenarios, EFFICIENCY_TOL),
            Err(ReportError::InconsistentDmuSets(_))
        ));
    }

    fn ranked_record(name: &str, rank: Option<u8>) -> DmuRecord {
        DmuRecord {
            name: name.into(),
            category: String::new(),
            sub_category: String::new(),
            corpus_crore: None,
            inception_date: None,
            metrics: MetricSet::default(),
            external_rank: rank,
        }
    }

    #[test]
    fn crosstab_hand_tally() {
        let scenarios = vec![scenario(
            "only",
            false,
            &[("a", 1.0), ("b", 0.5), ("c", 1.0), ("d", 0.9)],
        )];
        let classes = classify(&scenarios, EFFICIENCY_TOL).unwrap();
        let records = vec![
            ranked_record("a", Some(1)),
            ranked_record("b", Some(1)),
            ranked_record("c", Some(2)),
            ranked_record("d", None),
        ];
        let xtab = crosstab(&records, &classes, EfficiencyRule::AnyScenario).unwrap();
        assert_eq!(xtab.rows[0], CrosstabRow { rank: 1, total: 2, efficient: 1, inefficient: 1 });
        assert_eq!(xtab.rows[1], CrosstabRow { rank: 2, total: 1, efficient: 1, inefficient: 0 });
        assert_eq!(xtab.total.total, 3);
        assert_eq!(xtab.total.efficient, 2);
        assert_eq!(xtab.unranked, 1);
        for row in &xtab.rows {
            assert_eq!(row.efficient + row.inefficient, row.total);
        }
    }

    #[test]
    fn crosstab_sums_hold_on_random_inputs() {
        let mut state = 42u64;
        let mut next = |bound: u64| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state % bound
        };
        for _ in 0..50 {
            let n = 3 + next(40) as usize;
            let scores: Vec<(String, f64)> = (0..n)
                .map(|i| {
                    let s = if next(3) == 0 { 1.0 } else { 0.5 };
                    (format!("f{i}"), s)
                })
                .collect();
            let refs: Vec<(&str, f64)> =
                scores.iter().map(|(id, s)| (id.as_str(), *s)).collect();
            let classes = classify(&[scenario("s", false, &refs)], EFFICIENCY_TOL).unwrap();
            let records: Vec<DmuRecord> = scores
                .iter()
                .map(|(id, _)| {
                    let rank = next(6) as u8; // 0 means unranked
                    ranked_record(id, (rank > 0).then_some(rank))
                })
                .collect();
            match crosstab(&records, &classes, EfficiencyRule::AnyScenario) {
                Ok(xtab) => {
                    let mut ranked = 0;
                    for row in &xtab.rows {
                        assert_eq!(row.efficient + row.inefficient, row.total);
                        ranked += row.total;
                    }
                    assert_eq!(xtab.total.total, ranked);
                    assert_eq!(
                        xtab.total.efficient,
                        xtab.rows.iter().map(|r| r.efficient).sum::<usize>()
                    );
                    assert_eq!(ranked + xtab.unranked, n);
                }
                Err(ReportError::NoRankedFunds) => {
                    assert!(records.iter().all(|r| r.external_rank.is_none()));
                }
                Err(other) => panic!("unexpected {other}"),
            }
        }
    }

    #[test]
    fn crosstab_without_ranks_errors() {
        let scenarios = vec![scenario("only", false, &[("a", 1.0)])];
        let classes = classify(&scenarios, EFFICIENCY_TOL).unwrap();
        let records = vec![ranked_record("a", None)];
        assert!(matches!(
            crosstab(&records, &classes, EfficiencyRule::AnyScenario),
            Err(ReportError::NoRankedFunds)
        ));
    }

    #[test]
    fn render_rounds_scores_to_four_places() {
        let mut t = Table::new(vec!["name".into(), "efficiency".into()]);
        t.push(vec![Cell::Text("f".into()), Cell::Score(0.84729)]);
        let csv = render(&t, Format::Csv);
        assert!(csv.contains("0.8473"), "{csv}");
        let md = render(&t, Format::Markdown);
        assert!(md.contains("0.8473"), "{md}");
        // json keeps the value exactly
        let json = render(&t, Format::Json);
        assert!(json.contains("0.84729"), "{json}");
    }

    #[test]
    fn empty_table_renders_header_only() {
        let t = Table::new(vec!["a".into(), "b".into()]);
        assert_eq!(render(&t, Format::Csv), "a,b\n");
        let md = render(&t, Format::Markdown);
        assert_eq!(md.lines().count(), 2);
    }

    #[test]
    fn markdown_escapes_pipes() {
        let mut t = Table::new(vec!["name".into()]);
        t.push(vec![Cell::Text("weird|fund".into())]);
        let md = render(&t, Format::Markdown);
        assert!(md.contains("weird\\|fund"));
    }

    #[test]
    fn csv_render_parse_render_is_a_fixed_point() {
        let mut t = Table::new(vec!["name".into(), "efficiency".into(), "note".into()]);
        t.push(vec![
            Cell::Text("Fund, with comma".into()),
            Cell::Score(0.84729),
            Cell::Empty,
        ]);
        t.push(vec![
            Cell::Text("Other".into()),
            Cell::Score(1.0),
            Cell::Text("peer".into()),
        ]);
        let once = render(&t, Format::Csv);
        let twice = render(&parse(&once, Format::Csv).unwrap(), Format::Csv);
        assert_eq!(once, twice);
    }

    #[test]
    fn json_round_trips_losslessly() {
        let mut t = Table::new(vec!["name".into(), "value".into()]);
        t.push(vec![Cell::Text("x".into()), Cell::Score(0.123456789)]);
        let once = render(&t, Format::Json);
        let back = parse(&once, Format::Json).unwrap();
        match &back.rows[0][1] {
            Cell::Float(v) => assert_eq!(*v, 0.123456789),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(render(&back, Format::Json), once);
    }

    #[test]
    fn report_header_prepended_per_format() {
        let mut header = RunHeader::default();
        header.push("orientation", "input");
        header.push("epsilon", 1e-6);
        let mut t = Table::new(vec!["name".into()]);
        t.push(vec![Cell::Text("f".into())]);

        let csv = write_report(&header, &t, Format::Csv);
        assert!(csv.starts_with("# orientation: input\n# epsilon: 0.000001\n"));
        let parsed = parse(&csv, Format::Csv).unwrap();
        assert_eq!(parsed.rows.len(), 1);

        let json = write_report(&header, &t, Format::Json);
        let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(doc["run"]["orientation"], "input");

        let md = write_report(&header, &t, Format::Markdown);
        assert!(md.contains("**orientation:** input"));
    }

    #[test]
    fn efficiency_table_orders_by_rank() {
        let results = vec![
            result("slow", 0.5, "s"),
            result("fast", 1.0, "s"),
            result("mid", 0.75, "s"),
        ];
        let t = efficiency_table(&results);
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.rows[0][0], Cell::Text("fast".into()));
        assert_eq!(t.rows[0][1], Cell::Int(1));
        assert_eq!(t.rows[2][0], Cell::Text("slow".into()));
    }

    #[test]
    fn summary_table_lines_up_scenarios() {
        let scenarios = vec![
            scenario("s1", false, &[("a", 1.0), ("b", 0.8)]),
            scenario("s2", true, &[("a", 0.9), ("b", 1.0)]),
        ];
        let t = summary_table(&scenarios);
        assert_eq!(t.columns.len(), 5);
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[0][0], Cell::Text("a".into()));
        assert_eq!(t.rows[0][1], Cell::Int(1)); // rank in s1
        assert_eq!(t.rows[0][4], Cell::Score(0.9));
    }
}
