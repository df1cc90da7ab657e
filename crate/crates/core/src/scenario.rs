//! Named input/output variable selections and their translation into
//! solvable datasets, including the information-ratio standardization.
//!
//! The information ratio is a "more is better" quantity, so using it as a
//! minimized input would reward the worst funds. Each value is therefore
//! replaced by `X - IR` where `X` exceeds the largest information ratio in
//! the active peer set; the best fund then carries the smallest input.

use crate::dea::{DeaConfig, DeaDataset, DeaError, TranslationNote};
use crate::metrics::MetricSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario '{scenario}': {problem}")]
    BadSpec { scenario: String, problem: String },
    #[error("input values must be finite")]
    NonFiniteInput,
    #[error("cannot standardize an empty list")]
    EmptyInput,
    #[error("'{dmu_id}' is missing metric '{field}'")]
    MissingField { dmu_id: String, field: String },
    #[error("'{dmu_id}' has non-finite metric '{field}'")]
    NonFiniteField { dmu_id: String, field: String },
    #[error("nonpositive value {value} in '{field}' for '{dmu_id}' (strict positivity)")]
    PositivityViolation {
        dmu_id: String,
        field: String,
        value: f64,
    },
    #[error(transparent)]
    Dea(#[from] DeaError),
}

/// A named selection of metric fields for one benchmarking run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub input_fields: Vec<String>,
    pub output_fields: Vec<String>,
    /// Replace the information-ratio column by its `X - IR` transform.
    pub ir_standardize: bool,
    pub dea: DeaConfig,
}

impl ScenarioSpec {
    pub fn new(
        name: impl Into<String>,
        input_fields: &[&str],
        ir_standardize: bool,
    ) -> Self {
        Self {
            name: name.into(),
            input_fields: input_fields.iter().map(|s| s.to_string()).collect(),
            output_fields: vec!["expected_return".to_string()],
            ir_standardize,
            dea: DeaConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let bad = |problem: String| ScenarioError::BadSpec {
            scenario: self.name.clone(),
            problem,
        };
        if self.input_fields.is_empty() {
            return Err(bad("no input fields".into()));
        }
        if self.output_fields.is_empty() {
            return Err(bad("no output fields".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for f in self.input_fields.iter().chain(&self.output_fields) {
            if !MetricSet::is_known_field(f) {
                return Err(bad(format!("unknown metric field '{f}'")));
            }
            if !seen.insert(f.clone()) {
                return Err(bad(format!("duplicate field '{f}'")));
            }
        }
        if self.ir_standardize
            && !self.input_fields.iter().any(|f| f == "information_ratio")
        {
            return Err(bad(
                "ir_standardize requires 'information_ratio' among the inputs".into(),
            ));
        }
        self.dea.validate()?;
        Ok(())
    }
}

/// Record of one `X - IR` transformation, kept for report headers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationReport {
    /// The shift constant X (largest information ratio plus one).
    pub shift: f64,
    pub max_ir: f64,
    pub transformed_min: f64,
}

/// Everything assemble() changed about the raw metric values.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ScenarioAdjustments {
    pub standardization: Option<StandardizationReport>,
    pub translations: Vec<TranslationNote>,
}

/// The five built-in scenarios: three risk/cost ladders and two
/// information-ratio variants, all against expected return.
pub fn builtin_scenarios() -> Vec<ScenarioSpec> {
    vec![
        ScenarioSpec::new(
            "3 Inputs",
            &["beta", "downside_probability", "expense_ratio"],
            false,
        ),
        ScenarioSpec::new(
            "4 Inputs",
            &["beta", "downside_probability", "expense_ratio", "std_dev"],
            false,
        ),
        ScenarioSpec::new(
            "5 Inputs",
            &[
                "beta",
                "downside_probability",
                "expense_ratio",
                "std_dev",
                "var_pct_corpus",
            ],
            false,
        ),
        ScenarioSpec::new(
            "IR_4 Inputs",
            &[
                "information_ratio",
                "expense_ratio",
                "downside_probability",
                "std_dev",
            ],
            true,
        ),
        ScenarioSpec::new(
            "IR 5 Inputs",
            &[
                "information_ratio",
                "expense_ratio",
                "downside_probability",
                "std_dev",
                "var_pct_corpus",
            ],
            true,
        ),
    ]
}

/// Looks a built-in scenario up by name.
pub fn builtin_scenario(name: &str) -> Option<ScenarioSpec> {
    builtin_scenarios().into_iter().find(|s| s.name == name)
}

/// `X - IR` with `X = max(IR) + 1`: order-reversing, and every transformed
/// value lands at or above 1.
pub fn standardize_ir(
    ir_values: &[f64],
) -> Result<(Vec<f64>, StandardizationReport), ScenarioError> {
    if ir_values.is_empty() {
        return Err(ScenarioError::EmptyInput);
    }
    if ir_values.iter().any(|v| !v.is_finite()) {
        return Err(ScenarioError::NonFiniteInput);
    }
    let max_ir = ir_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let shift = max_ir + 1.0;
    let transformed: Vec<f64> = ir_values.iter().map(|v| shift - v).collect();
    let transformed_min = transformed.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((
        transformed,
        StandardizationReport {
            shift,
            max_ir,
            transformed_min,
        },
    ))
}

/// Builds the dataset for one scenario from per-fund metric sets. Matrix
/// rows follow the scenario's field order; the information-ratio column is
/// replaced by its standardized transform when requested, and positivity is
/// enforced (or repaired) according to the scenario's model configuration.
pub fn assemble(
    metric_table: &[(String, MetricSet)],
    spec: &ScenarioSpec,
) -> Result<(DeaDataset, ScenarioAdjustments), ScenarioError> {
    spec.validate()?;
    let mut adjustments = ScenarioAdjustments::default();

    let column = |field: &str| -> Result<Vec<f64>, ScenarioError> {
        metric_table
            .iter()
            .map(|(dmu_id, set)| {
                let v = set
                    .get(field)
                    .expect("validated field")
                    .ok_or_else(|| ScenarioError::MissingField {
                        dmu_id: dmu_id.clone(),
                        field: field.to_string(),
                    })?;
                if !v.is_finite() {
                    return Err(ScenarioError::NonFiniteField {
                        dmu_id: dmu_id.clone(),
                        field: field.to_string(),
                    });
                }
                Ok(v)
            })
            .collect()
    };

    let mut input_names = Vec::new();
    let mut inputs = Vec::new();
    for field in &spec.input_fields {
        let raw = column(field)?;
        if spec.ir_standardize && field == "information_ratio" {
            let (transformed, report) = standardize_ir(&raw)?;
            adjustments.standardization = Some(report);
            input_names.push(format!("{field}_std"));
            inputs.push(transformed);
        } else {
            input_names.push(field.clone());
            inputs.push(raw);
        }
    }
    let mut output_names = Vec::new();
    let mut outputs = Vec::new();
    for field in &spec.output_fields {
        output_names.push(field.clone());
        outputs.push(column(field)?);
    }

    let dmu_ids: Vec<String> = metric_table.iter().map(|(id, _)| id.clone()).collect();
    let dataset = DeaDataset::new(dmu_ids, input_names, inputs, output_names, outputs)?;

    use crate::dea::Positivity;
    match spec.dea.positivity {
        Positivity::Strict => {
            dataset.validate_positive().map_err(|e| match e {
                DeaError::PositivityViolation {
                    dmu_id,
                    variable,
                    value,
                } => ScenarioError::PositivityViolation {
                    dmu_id,
                    field: variable,
                    value,
                },
                other => ScenarioError::Dea(other),
            })?;
            Ok((dataset, adjustments))
        }
        Positivity::Translate => {
            let (shifted, notes) = dataset.translated();
            adjustments.translations = notes;
            Ok((shifted, adjustments))
        }
    }
}
