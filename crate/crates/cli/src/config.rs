//! Run configuration: a TOML document plus command-line overrides, flags
//! winning over file values over built-in defaults.

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use fundea_core::data_io::FilterPolicy;
use fundea_core::dea::{DeaConfig, Orientation, Positivity, Rts, SlackStage};
use fundea_core::report::{EfficiencyRule, Format};
use fundea_core::scenario::{builtin_scenario, builtin_scenarios, ScenarioSpec};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub input: InputSection,
    #[serde(default)]
    pub filters: FiltersSection,
    #[serde(default)]
    pub market: MarketSection,
    #[serde(default)]
    pub dea: DeaSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default, rename = "scenario")]
    pub custom_scenarios: Vec<CustomScenario>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    /// Schema A metric table.
    pub metrics: Option<PathBuf>,
    /// Schema B monthly NAV panel.
    pub navs: Option<PathBuf>,
    pub benchmark: Option<PathBuf>,
    pub ranks: Option<PathBuf>,
    pub costs: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltersSection {
    pub min_corpus: Option<f64>,
    pub inception_cutoff: Option<NaiveDate>,
    pub require_complete: Option<bool>,
    pub as_of: Option<NaiveDate>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketSection {
    pub risk_free: Option<f64>,
    pub mar: Option<f64>,
    pub var_confidence: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeaSection {
    pub rts: Option<String>,
    pub orientation: Option<String>,
    pub epsilon: Option<f64>,
    pub slack_stage: Option<String>,
    pub positivity: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub group_by: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    /// Built-in scenario names to run; defaults to all five.
    pub scenarios: Option<Vec<String>>,
    pub crosstab_rule: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomScenario {
    pub name: String,
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Option<Vec<String>>,
    #[serde(default)]
    pub ir_standardize: bool,
}

/// Flag values collected by clap; `None` means "not given".
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub benchmark: Option<PathBuf>,
    pub ranks: Option<PathBuf>,
    pub costs: Option<PathBuf>,
    pub group_by: Option<String>,
    pub rts: Option<String>,
    pub orientation: Option<String>,
    pub epsilon: Option<f64>,
    pub slack_stage: Option<String>,
    pub positivity: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub scenarios: Vec<String>,
    pub risk_free: Option<f64>,
    pub mar: Option<f64>,
    pub var_confidence: Option<f64>,
    pub min_corpus: Option<f64>,
    pub inception_cutoff: Option<NaiveDate>,
    pub as_of: Option<NaiveDate>,
    pub no_require_complete: bool,
    pub crosstab_rule: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    All,
    SubCategory,
}

/// Fully resolved run settings.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub input_metrics: Option<PathBuf>,
    pub input_navs: Option<PathBuf>,
    pub benchmark: Option<PathBuf>,
    pub ranks: Option<PathBuf>,
    pub costs: Option<PathBuf>,
    pub filters: FilterPolicy,
    pub as_of: NaiveDate,
    pub risk_free: f64,
    pub mar: f64,
    pub var_confidence: f64,
    pub dea: DeaConfig,
    pub scenarios: Vec<ScenarioSpec>,
    pub group_by: GroupBy,
    pub format: Format,
    pub out: PathBuf,
    pub crosstab_rule: EfficiencyRule,
}

fn parse_rts(s: &str) -> Result<Rts> {
    match s {
        "crs" => Ok(Rts::Crs),
        "vrs" => Ok(Rts::Vrs),
        other => bail!("rts must be 'crs' or 'vrs', got '{other}'"),
    }
}

fn parse_orientation(s: &str) -> Result<Orientation> {
    match s {
        "input" => Ok(Orientation::Input),
        "output" => Ok(Orientation::Output),
        other => bail!("orientation must be 'input' or 'output', got '{other}'"),
    }
}

fn parse_slack(s: &str) -> Result<SlackStage> {
    match s {
        "off" => Ok(SlackStage::Off),
        "maximize" => Ok(SlackStage::Maximize),
        other => bail!("slack_stage must be 'off' or 'maximize', got '{other}'"),
    }
}

fn parse_positivity(s: &str) -> Result<Positivity> {
    match s {
        "strict" => Ok(Positivity::Strict),
        "translate" => Ok(Positivity::Translate),
        other => bail!("positivity must be 'strict' or 'translate', got '{other}'"),
    }
}

fn parse_format(s: &str) -> Result<Format> {
    match s {
        "csv" => Ok(Format::Csv),
        "markdown" => Ok(Format::Markdown),
        "json" => Ok(Format::Json),
        other => bail!("format must be 'csv', 'markdown' or 'json', got '{other}'"),
    }
}

fn parse_group_by(s: &str) -> Result<GroupBy> {
    match s {
        "all" => Ok(GroupBy::All),
        "sub-category" | "sub_category" => Ok(GroupBy::SubCategory),
        other => bail!("group-by must be 'all' or 'sub-category', got '{other}'"),
    }
}

fn parse_rule(s: &str) -> Result<EfficiencyRule> {
    match s {
        "any" | "any_scenario" => Ok(EfficiencyRule::AnyScenario),
        "all" | "all_scenarios" => Ok(EfficiencyRule::AllScenarios),
        other => bail!("crosstab rule must be 'any' or 'all', got '{other}'"),
    }
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

/// Merges defaults, the optional config file, and flag overrides, then
/// validates the combination. Called once per command.
pub fn resolve(file: Option<FileConfig>, flags: &Overrides) -> Result<Resolved> {
    let file = file.unwrap_or_default();

    // The --input flag accepts either schema; disambiguate by extension
    // being impossible, so it is interpreted as whichever schema the config
    // file did not already name, defaulting to the metric table.
    let mut input_metrics = file.input.metrics;
    let mut input_navs = file.input.navs;
    if let Some(p) = &flags.input {
        if flags.benchmark.is_some() || (input_navs.is_some() && input_metrics.is_none()) {
            input_navs = Some(p.clone());
        } else {
            input_metrics = Some(p.clone());
        }
    }
    let benchmark = flags.benchmark.clone().or(file.input.benchmark);
    if input_metrics.is_some() && input_navs.is_some() {
        bail!("provide either a metric table or a NAV panel, not both");
    }
    if input_metrics.is_none() && input_navs.is_none() {
        bail!("no input given: set --input or [input] in the config file");
    }
    if input_navs.is_some() && benchmark.is_none() {
        bail!("a NAV panel needs --benchmark");
    }

    let defaults = FilterPolicy::default();
    let filters = FilterPolicy {
        min_corpus: flags
            .min_corpus
            .or(file.filters.min_corpus)
            .unwrap_or(defaults.min_corpus),
        inception_cutoff: flags
            .inception_cutoff
            .or(file.filters.inception_cutoff)
            .unwrap_or(defaults.inception_cutoff),
        require_complete: if flags.no_require_complete {
            false
        } else {
            file.filters
                .require_complete
                .unwrap_or(defaults.require_complete)
        },
    };
    let as_of = flags
        .as_of
        .or(file.filters.as_of)
        .unwrap_or_else(|| NaiveDate::from_ymd_opt(2020, 6, 29).expect("valid date"));

    let var_confidence = flags
        .var_confidence
        .or(file.market.var_confidence)
        .unwrap_or(0.95);
    if !(var_confidence > 0.5 && var_confidence < 1.0) {
        bail!("var confidence {var_confidence} outside (0.5, 1)");
    }

    let base = DeaConfig::default();
    let dea = DeaConfig {
        returns_to_scale: match flags.rts.as_deref().or(file.dea.rts.as_deref()) {
            Some(s) => parse_rts(s)?,
            None => base.returns_to_scale,
        },
        orientation: match flags
            .orientation
            .as_deref()
            .or(file.dea.orientation.as_deref())
        {
            Some(s) => parse_orientation(s)?,
            None => base.orientation,
        },
        epsilon: flags.epsilon.or(file.dea.epsilon).unwrap_or(base.epsilon),
        slack_stage: match flags
            .slack_stage
            .as_deref()
            .or(file.dea.slack_stage.as_deref())
        {
            Some(s) => parse_slack(s)?,
            None => base.slack_stage,
        },
        positivity: match flags
            .positivity
            .as_deref()
            .or(file.dea.positivity.as_deref())
        {
            Some(s) => parse_positivity(s)?,
            None => base.positivity,
        },
    };
    dea.validate()?;

    // Scenario list: explicit names (flags beat file) resolved against the
    // built-ins and the config file's custom blocks; default is all five
    // built-ins.
    let mut custom: Vec<ScenarioSpec> = Vec::new();
    for c in &file.custom_scenarios {
        let inputs: Vec<&str> = c.inputs.iter().map(|s| s.as_str()).collect();
        let mut spec = ScenarioSpec::new(c.name.clone(), &inputs, c.ir_standardize);
        if let Some(outs) = &c.outputs {
            spec.output_fields = outs.clone();
        }
        custom.push(spec);
    }
    let requested: Option<Vec<String>> = if !flags.scenarios.is_empty() {
        Some(flags.scenarios.clone())
    } else {
        file.run.scenarios.clone()
    };
    let mut scenarios: Vec<ScenarioSpec> = match requested {
        Some(names) => {
            let mut specs = Vec::new();
            for name in names {
                let spec = builtin_scenario(&name)
                    .or_else(|| custom.iter().find(|c| c.name == name).cloned())
                    .with_context(|| format!("unknown scenario '{name}'"))?;
                specs.push(spec);
            }
            specs
        }
        None if !custom.is_empty() => custom.clone(),
        None => builtin_scenarios(),
    };
    if scenarios.is_empty() {
        bail!("scenario list is empty");
    }
    for spec in scenarios.iter_mut() {
        spec.dea = dea;
        spec.validate()?;
    }

    Ok(Resolved {
        input_metrics,
        input_navs,
        benchmark,
        ranks: flags.ranks.clone().or(file.input.ranks),
        costs: flags.costs.clone().or(file.input.costs),
        filters,
        as_of,
        risk_free: flags.risk_free.or(file.market.risk_free).unwrap_or(0.0),
        mar: flags.mar.or(file.market.mar).unwrap_or(0.0),
        var_confidence,
        dea,
        scenarios,
        group_by: match flags
            .group_by
            .as_deref()
            .or(file.run.group_by.as_deref())
        {
            Some(s) => parse_group_by(s)?,
            None => GroupBy::All,
        },
        format: match flags.format.as_deref().or(file.run.format.as_deref()) {
            Some(s) => parse_format(s)?,
            None => Format::Csv,
        },
        out: flags
            .out
            .clone()
            .or(file.run.out)
            .unwrap_or_else(|| PathBuf::from("out")),
        crosstab_rule: match flags
            .crosstab_rule
            .as_deref()
            .or(file.run.crosstab_rule.as_deref())
        {
            Some(s) => parse_rule(s)?,
            None => EfficiencyRule::AnyScenario,
        },
    })
}
