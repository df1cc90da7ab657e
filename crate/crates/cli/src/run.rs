//! Command implementations: metric computation, per-group benchmarking,
//! and report generation, orchestrated over the resolved configuration.

use crate::config::{GroupBy, Resolved};
use anyhow::{bail, Context, Result};
use fundea_core::data_io::{
    self, apply_filters, load_metric_table, load_return_panel, save_metric_table, DmuRecord,
    FilterOutcome,
};
use fundea_core::dea::{self, EfficiencyResult, Orientation, Rts};
use fundea_core::metrics::compute_metric_set;
use fundea_core::report::{
    self, classification_table, classify, crosstab, crosstab_table, efficiency_table,
    summary_table, Cell, EfficiencyClass, ReportError, RunHeader, ScenarioResults, Table,
    EFFICIENCY_TOL,
};
use fundea_core::scenario::{assemble, ScenarioAdjustments, ScenarioSpec};
use std::collections::BTreeSet;
use std::fmt::Display;
use std::path::PathBuf;

/// Stderr diagnostics; the exit status is 0 iff no error-level line was
/// emitted.
#[derive(Debug, Default)]
pub struct Reporter {
    pub errors: usize,
}

impl Reporter {
    pub fn warn(&mut self, msg: impl Display) {
        eprintln!("warning: {msg}");
    }

    pub fn error(&mut self, msg: impl Display) {
        eprintln!("error: {msg}");
        self.errors += 1;
    }
}

fn slug(s: &str) -> String {
    let mut out = String::new();
    let mut last_sep = true;
    for c in s.chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
            last_sep = false;
        } else if !last_sep {
            out.push('-');
            last_sep = true;
        }
    }
    out.trim_end_matches('-').to_string()
}

fn fields_in_use(scenarios: &[ScenarioSpec]) -> Vec<String> {
    let mut set = BTreeSet::new();
    for s in scenarios {
        set.extend(s.input_fields.iter().cloned());
        set.extend(s.output_fields.iter().cloned());
    }
    set.into_iter().collect()
}

/// Loads records from whichever schema the run names, computing metrics from
/// NAVs when needed and joining cost and rank files.
fn obtain_records(r: &Resolved, reporter: &mut Reporter) -> Result<Vec<DmuRecord>> {
    let mut records = if let Some(path) = &r.input_metrics {
        load_metric_table(path).with_context(|| format!("loading {}", path.display()))?
    } else {
        compute_records_from_navs(r, reporter)?
    };

    if let Some(costs) = &r.costs {
        let (joined, unmatched) = data_io::join_costs(records, costs)
            .with_context(|| format!("loading {}", costs.display()))?;
        records = joined;
        if !unmatched.is_empty() {
            reporter.warn(format!(
                "{} cost row(s) matched no fund: {}",
                unmatched.len(),
                unmatched.join(", ")
            ));
        }
    }
    if let Some(ranks) = &r.ranks {
        let join = data_io::join_external_ranks(records, ranks)
            .with_context(|| format!("loading {}", ranks.display()))?;
        records = join.records;
        if !join.unmatched.is_empty() {
            reporter.warn(format!(
                "{} rank row(s) matched no fund: {}",
                join.unmatched.len(),
                join.unmatched.join(", ")
            ));
        }
    }
    Ok(records)
}

fn compute_records_from_navs(r: &Resolved, reporter: &mut Reporter) -> Result<Vec<DmuRecord>> {
    let navs = r
        .input_navs
        .as_ref()
        .context("this command needs a NAV panel (schema B) as input")?;
    let benchmark = r.benchmark.as_ref().context("missing --benchmark")?;
    let (series, ctx) = load_return_panel(navs, benchmark)
        .with_context(|| format!("loading {}", navs.display()))?;
    let ctx = ctx
        .with_rates(r.risk_free, r.mar)
        .with_var_confidence(r.var_confidence)?;

    let mut records = Vec::with_capacity(series.len());
    for fund in &series {
        let (metrics, warnings) = compute_metric_set(fund, &ctx);
        for w in warnings {
            reporter.warn(format!("{}: {} skipped ({})", w.fund_id, w.metric, w.reason));
        }
        records.push(DmuRecord {
            name: fund.fund_id.clone(),
            category: String::new(),
            sub_category: String::new(),
            corpus_crore: None,
            inception_date: None,
            metrics,
            external_rank: None,
        });
    }
    Ok(records)
}

fn base_header(r: &Resolved) -> RunHeader {
    let mut h = RunHeader::default();
    h.push("tool", format!("fundea {}", env!("CARGO_PKG_VERSION")));
    if let Some(p) = &r.input_metrics {
        h.push("input_metrics", p.display());
    }
    if let Some(p) = &r.input_navs {
        h.push("input_navs", p.display());
    }
    if let Some(p) = &r.benchmark {
        h.push("benchmark", p.display());
    }
    if let Some(p) = &r.ranks {
        h.push("ranks", p.display());
    }
    if let Some(p) = &r.costs {
        h.push("costs", p.display());
    }
    h.push(
        "group_by",
        match r.group_by {
            GroupBy::All => "all",
            GroupBy::SubCategory => "sub-category",
        },
    );
    h.push(
        "rts",
        match r.dea.returns_to_scale {
            Rts::Crs => "crs",
            Rts::Vrs => "vrs",
        },
    );
    h.push(
        "orientation",
        match r.dea.orientation {
            Orientation::Input => "input",
            Orientation::Output => "output",
        },
    );
    h.push("epsilon", r.dea.epsilon);
    h.push("slack_stage", format!("{:?}", r.dea.slack_stage).to_lowercase());
    h.push("positivity", format!("{:?}", r.dea.positivity).to_lowercase());
    h.push("risk_free", r.risk_free);
    h.push("mar", r.mar);
    h.push("var_confidence", r.var_confidence);
    h.push("min_corpus", r.filters.min_corpus);
    h.push("inception_cutoff", r.filters.inception_cutoff);
    h.push("require_complete", r.filters.require_complete);
    h.push("as_of", r.as_of);
    h.push(
        "scenarios",
        r.scenarios
            .iter()
            .map(|s| s.name.as_str())
            .collect::<Vec<_>>()
            .join("; "),
    );
    h
}

fn write_artifact(
    r: &Resolved,
    name_stem: &str,
    header: &RunHeader,
    table: &Table,
) -> Result<PathBuf> {
    std::fs::create_dir_all(&r.out)
        .with_context(|| format!("creating {}", r.out.display()))?;
    let path = r.out.join(format!("{name_stem}.{}", r.format.extension()));
    let text = report::write_report(header, table, r.format);
    std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

/// One peer group's scenario runs.
struct GroupRun {
    name: String,
    members: Vec<DmuRecord>,
    /// (spec, adjustments, results) per scenario that solved.
    scenarios: Vec<(ScenarioSpec, ScenarioAdjustments, Vec<EfficiencyResult>)>,
    complete: bool,
}

struct Analysis {
    outcome: FilterOutcome,
    groups: Vec<GroupRun>,
    /// Classes merged across all complete groups.
    classes: Vec<EfficiencyClass>,
}

fn analyze(r: &Resolved, reporter: &mut Reporter) -> Result<Analysis> {
    let records = obtain_records(r, reporter)?;
    let required = fields_in_use(&r.scenarios);
    let outcome = apply_filters(records, &r.filters, r.as_of, &required);
    if !outcome.dropped.is_empty() {
        reporter.warn(format!(
            "{} fund(s) dropped by the universe filters; see the drops report",
            outcome.dropped.len()
        ));
    }
    if outcome.kept.is_empty() {
        bail!("no fund survived the universe filters");
    }

    // Peer groups: the whole universe, or one group per sub-category label
    // (unknown labels form their own groups).
    let mut grouped: std::collections::BTreeMap<String, Vec<DmuRecord>> = Default::default();
    match r.group_by {
        GroupBy::All => {
            grouped.insert("all".to_string(), outcome.kept.clone());
        }
        GroupBy::SubCategory => {
            for record in &outcome.kept {
                let label = if record.sub_category.is_empty() {
                    "(unlabelled)".to_string()
                } else {
                    record.sub_category.clone()
                };
                grouped.entry(label).or_default().push(record.clone());
            }
        }
    }

    let mut groups = Vec::new();
    for (name, members) in grouped {
        if members.len() == 1 {
            reporter.warn(format!(
                "peer set '{name}' has a single fund '{}'; it is its own frontier and scores 1",
                members[0].name
            ));
        }
        let table: Vec<(String, fundea_core::metrics::MetricSet)> = members
            .iter()
            .map(|m| (m.name.clone(), m.metrics.clone()))
            .collect();
        let mut runs = Vec::new();
        let mut complete = true;
        for spec in &r.scenarios {
            let assembled = assemble(&table, spec);
            let (dataset, adjustments) = match assembled {
                Ok(x) => x,
                Err(e) => {
                    reporter.error(format!("group '{name}', scenario '{}': {e}", spec.name));
                    complete = false;
                    continue;
                }
            };
            for note in &adjustments.translations {
                reporter.warn(format!(
                    "group '{name}', scenario '{}': shifted '{}' by +{} to restore positivity",
                    spec.name, note.variable, note.shift
                ));
            }
            match dea::run_scenario(&dataset, &spec.dea, &spec.name) {
                Ok(results) => runs.push((spec.clone(), adjustments, results)),
                Err(e) => {
                    reporter.error(format!("group '{name}', scenario '{}': {e}", spec.name));
                    complete = false;
                }
            }
        }
        groups.push(GroupRun {
            name,
            members,
            scenarios: runs,
            complete,
        });
    }

    // Classification per complete group, merged for the crosstab.
    let mut classes = Vec::new();
    for group in &groups {
        if !group.complete || group.scenarios.is_empty() {
            continue;
        }
        let per: Vec<ScenarioResults> = group
            .scenarios
            .iter()
            .map(|(spec, _, results)| ScenarioResults {
                scenario_name: spec.name.clone(),
                ir_scenario: spec.ir_standardize,
                results: results.clone(),
            })
            .collect();
        match classify(&per, EFFICIENCY_TOL) {
            Ok(mut c) => classes.append(&mut c),
            Err(e) => reporter.error(format!("classifying group '{}': {e}", group.name)),
        }
    }

    Ok(Analysis {
        outcome,
        groups,
        classes,
    })
}

fn drops_table(outcome: &FilterOutcome) -> Table {
    let mut t = Table::new(vec!["name".into(), "reason".into()]);
    for (record, reason) in &outcome.dropped {
        t.push(vec![
            Cell::Text(record.name.clone()),
            Cell::Text(reason.to_string()),
        ]);
    }
    t
}

fn write_dea_artifacts(r: &Resolved, analysis: &Analysis, reporter: &mut Reporter) -> Result<()> {
    let path = write_artifact(r, "drops", &base_header(r), &drops_table(&analysis.outcome))?;
    println!("wrote {}", path.display());

    for group in &analysis.groups {
        let gslug = slug(&group.name);
        for (spec, adjustments, results) in &group.scenarios {
            let mut header = base_header(r);
            header.push("scenario", &spec.name);
            header.push("scenario_inputs", spec.input_fields.join("; "));
            header.push("scenario_outputs", spec.output_fields.join("; "));
            header.push("peer_set", &group.name);
            header.push("peer_count", group.members.len());
            if let Some(s) = &adjustments.standardization {
                header.push("ir_shift_constant", s.shift);
                header.push("ir_max", s.max_ir);
            }
            for note in &adjustments.translations {
                header.push(
                    "translated",
                    format!("{} by +{}", note.variable, note.shift),
                );
            }
            let path = write_artifact(
                r,
                &format!("dea_{gslug}__{}", slug(&spec.name)),
                &header,
                &efficiency_table(results),
            )?;
            println!("wrote {}", path.display());
        }

        if !group.scenarios.is_empty() {
            let per: Vec<ScenarioResults> = group
                .scenarios
                .iter()
                .map(|(spec, _, results)| ScenarioResults {
                    scenario_name: spec.name.clone(),
                    ir_scenario: spec.ir_standardize,
                    results: results.clone(),
                })
                .collect();
            let mut header = base_header(r);
            header.push("peer_set", &group.name);
            header.push("peer_count", group.members.len());
            let path = write_artifact(
                r,
                &format!("summary_{gslug}"),
                &header,
                &summary_table(&per),
            )?;
            println!("wrote {}", path.display());
        } else {
            reporter.warn(format!(
                "group '{}' produced no scenario results; summary skipped",
                group.name
            ));
        }
    }
    Ok(())
}

fn write_report_artifacts(
    r: &Resolved,
    analysis: &Analysis,
    reporter: &mut Reporter,
) -> Result<()> {
    for group in &analysis.groups {
        if !group.complete || group.scenarios.is_empty() {
            reporter.warn(format!(
                "group '{}' incomplete; classification skipped",
                group.name
            ));
            continue;
        }
        let per: Vec<ScenarioResults> = group
            .scenarios
            .iter()
            .map(|(spec, _, results)| ScenarioResults {
                scenario_name: spec.name.clone(),
                ir_scenario: spec.ir_standardize,
                results: results.clone(),
            })
            .collect();
        let classes = classify(&per, EFFICIENCY_TOL)
            .map_err(|e| anyhow::anyhow!("classifying group '{}': {e}", group.name))?;
        let mut header = base_header(r);
        header.push("peer_set", &group.name);
        header.push("efficiency_tolerance", EFFICIENCY_TOL);
        let path = write_artifact(
            r,
            &format!("classification_{}", slug(&group.name)),
            &header,
            &classification_table(&classes),
        )?;
        println!("wrote {}", path.display());
    }

    // Crosstab over every classified, ranked fund across all groups.
    let all_members: Vec<DmuRecord> = analysis
        .groups
        .iter()
        .filter(|g| g.complete && !g.scenarios.is_empty())
        .flat_map(|g| g.members.iter().cloned())
        .collect();
    match crosstab(&all_members, &analysis.classes, r.crosstab_rule) {
        Ok(xtab) => {
            let mut header = base_header(r);
            header.push(
                "efficiency_rule",
                match r.crosstab_rule {
                    report::EfficiencyRule::AnyScenario => "any_scenario",
                    report::EfficiencyRule::AllScenarios => "all_scenarios",
                },
            );
            header.push("unranked_funds", xtab.unranked);
            let path = write_artifact(r, "crosstab", &header, &crosstab_table(&xtab))?;
            println!("wrote {}", path.display());
        }
        Err(ReportError::NoRankedFunds) => {
            reporter.warn("no fund carries an external rank; crosstab skipped");
        }
        Err(e) => reporter.error(format!("crosstab: {e}")),
    }
    Ok(())
}

/// Computes metrics from a NAV panel and writes the Schema A table.
pub fn cmd_metrics(r: &Resolved, reporter: &mut Reporter) -> Result<()> {
    if r.input_navs.is_none() {
        bail!("the metrics command needs a NAV panel (schema B); got a metric table");
    }
    let mut records = compute_records_from_navs(r, reporter)?;
    if let Some(costs) = &r.costs {
        let (joined, unmatched) = data_io::join_costs(records, costs)?;
        records = joined;
        if !unmatched.is_empty() {
            reporter.warn(format!(
                "{} cost row(s) matched no fund",
                unmatched.len()
            ));
        }
    }
    std::fs::create_dir_all(&r.out)?;
    let path = r.out.join("metrics.csv");
    save_metric_table(&path, &records)?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Scores every scenario over every peer group and writes the score tables.
pub fn cmd_dea(r: &Resolved, reporter: &mut Reporter) -> Result<()> {
    let analysis = analyze(r, reporter)?;
    write_dea_artifacts(r, &analysis, reporter)
}

/// Writes the cross-scenario classification and the external-rank crosstab.
pub fn cmd_report(r: &Resolved, reporter: &mut Reporter) -> Result<()> {
    let analysis = analyze(r, reporter)?;
    write_report_artifacts(r, &analysis, reporter)
}

/// metrics (when fed NAVs) + dea + report in one pass.
pub fn cmd_pipeline(r: &Resolved, reporter: &mut Reporter) -> Result<()> {
    if r.input_navs.is_some() {
        cmd_metrics(r, reporter)?;
    }
    let analysis = analyze(r, reporter)?;
    write_dea_artifacts(r, &analysis, reporter)?;
    write_report_artifacts(r, &analysis, reporter)
}
