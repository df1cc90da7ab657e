//! fundea: benchmark mutual funds against their peers.
//!
//! Subcommands: `metrics` (NAV panel -> metric table), `dea` (metric table
//! -> efficiency scores per scenario), `report` (classification and rank
//! crosstab), `pipeline` (all three in sequence).

mod config;
mod run;

use anyhow::Result;
use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use config::{load_file, resolve, Overrides};
use run::Reporter;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fundea",
    version,
    about = "Relative efficiency benchmarking of mutual funds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the metric table from a monthly NAV panel
    Metrics(CommonArgs),
    /// Score every fund against its peers in each scenario
    Dea(CommonArgs),
    /// Write the efficiency classification and the external-rank crosstab
    Report(CommonArgs),
    /// metrics + dea + report in one run
    Pipeline(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// TOML run configuration; flags override file values
    #[arg(long)]
    config: Option<PathBuf>,

    /// Input data: a metric table (schema A) or, together with
    /// --benchmark, a NAV panel (schema B)
    #[arg(long)]
    input: Option<PathBuf>,

    /// Benchmark NAV series (date,nav); marks --input as a NAV panel
    #[arg(long)]
    benchmark: Option<PathBuf>,

    /// External rank file (name,rank)
    #[arg(long)]
    ranks: Option<PathBuf>,

    /// Cost proxies (name,expense_ratio,exit_load), filled into the metric
    /// table where NAV data cannot provide them
    #[arg(long)]
    costs: Option<PathBuf>,

    /// Peer-set definition
    #[arg(long, value_parser = ["all", "sub-category"])]
    group_by: Option<String>,

    /// Returns to scale
    #[arg(long, value_parser = ["crs", "vrs"])]
    rts: Option<String>,

    #[arg(long, value_parser = ["input", "output"])]
    orientation: Option<String>,

    /// Lower bound on the virtual weights (0 disables it)
    #[arg(long)]
    epsilon: Option<f64>,

    /// Optional second stage maximizing total slack at the radial optimum
    #[arg(long, value_parser = ["off", "maximize"])]
    slack_stage: Option<String>,

    /// Reject or shift nonpositive metric values
    #[arg(long, value_parser = ["strict", "translate"])]
    positivity: Option<String>,

    #[arg(long, value_parser = ["csv", "markdown", "json"])]
    format: Option<String>,

    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,

    /// Scenario to run (repeatable); defaults to the five built-ins
    #[arg(long = "scenario")]
    scenarios: Vec<String>,

    /// Per-period risk-free rate
    #[arg(long)]
    risk_free: Option<f64>,

    /// Per-period minimum acceptable return
    #[arg(long)]
    mar: Option<f64>,

    #[arg(long)]
    var_confidence: Option<f64>,

    /// Minimum corpus (crore) a fund must hold
    #[arg(long)]
    min_corpus: Option<f64>,

    /// Funds incepted after this date are dropped
    #[arg(long)]
    inception_cutoff: Option<NaiveDate>,

    /// Evaluation date recorded in reports
    #[arg(long)]
    as_of: Option<NaiveDate>,

    /// Keep funds with missing metric values instead of dropping them
    #[arg(long)]
    no_require_complete: bool,

    /// When a fund counts as efficient in the crosstab
    #[arg(long, value_parser = ["any", "all"])]
    crosstab_rule: Option<String>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            input: self.input.clone(),
            benchmark: self.benchmark.clone(),
            ranks: self.ranks.clone(),
            costs: self.costs.clone(),
            group_by: self.group_by.clone(),
            rts: self.rts.clone(),
            orientation: self.orientation.clone(),
            epsilon: self.epsilon,
            slack_stage: self.slack_stage.clone(),
            positivity: self.positivity.clone(),
            format: self.format.clone(),
            out: self.out.clone(),
            scenarios: self.scenarios.clone(),
            risk_free: self.risk_free,
            mar: self.mar,
            var_confidence: self.var_confidence,
            min_corpus: self.min_corpus,
            inception_cutoff: self.inception_cutoff,
            as_of: self.as_of,
            no_require_complete: self.no_require_complete,
            crosstab_rule: self.crosstab_rule.clone(),
        }
    }
}

fn execute(command: &Command) -> Result<Reporter> {
    let args = match command {
        Command::Metrics(a) | Command::Dea(a) | Command::Report(a) | Command::Pipeline(a) => a,
    };
    let file = match &args.config {
        Some(path) => Some(load_file(path)?),
        None => None,
    };
    let resolved = resolve(file, &args.overrides())?;
    let mut reporter = Reporter::default();
    match command {
        Command::Metrics(_) => run::cmd_metrics(&resolved, &mut reporter)?,
        Command::Dea(_) => run::cmd_dea(&resolved, &mut reporter)?,
        Command::Report(_) => run::cmd_report(&resolved, &mut reporter)?,
        Command::Pipeline(_) => run::cmd_pipeline(&resolved, &mut reporter)?,
    }
    Ok(reporter)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(reporter) if reporter.errors == 0 => ExitCode::SUCCESS,
        Ok(reporter) => {
            eprintln!("finished with {} error(s)", reporter.errors);
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
