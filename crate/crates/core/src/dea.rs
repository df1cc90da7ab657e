//! Data envelopment analysis: builds and solves the CCR (constant returns
//! to scale) and BCC (variable returns to scale) programs per decision-making
//! unit, in multiplier and envelopment forms.
//!
//! The envelopment form is authoritative for the score: its intensity
//! variables give the reference set and the frontier projection directly, and
//! strong duality against the multiplier form provides a free cross-check.
//! The multiplier form is solved secondarily for interpretable virtual
//! weights.

#![allow(clippy::needless_range_loop)] // index-parallel matrix rows read clearest

use crate::lp::{self, LinearProgram, LpError, Relation, Sense};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Intensities below this threshold are treated as zero when building
/// reference sets.
const LAMBDA_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rts {
    /// Constant returns to scale (CCR).
    Crs,
    /// Variable returns to scale (BCC): appends the convexity constraint.
    Vrs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Input,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlackStage {
    Off,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Positivity {
    /// Reject nonpositive entries (the classical assumption).
    Strict,
    /// Shift offending variables by |min| + 1 before solving.
    Translate,
}

/// Model configuration shared by every unit in a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeaConfig {
    pub returns_to_scale: Rts,
    pub orientation: Orientation,
    /// Non-Archimedean lower bound on the virtual weights; zero disables it.
    pub epsilon: f64,
    pub slack_stage: SlackStage,
    pub positivity: Positivity,
}

impl Default for DeaConfig {
    fn default() -> Self {
        Self {
            returns_to_scale: Rts::Crs,
            orientation: Orientation::Input,
            epsilon: 1e-6,
            slack_stage: SlackStage::Off,
            positivity: Positivity::Strict,
        }
    }
}

impl DeaConfig {
    pub fn validate(&self) -> Result<(), DeaError> {
        if !(0.0..=1e-3).contains(&self.epsilon) || !self.epsilon.is_finite() {
            return Err(DeaError::BadEpsilon(self.epsilon));
        }
        Ok(())
    }
}

/// Input matrix X (one row per input variable), output matrix Y (one row per
/// output variable), and unit identities. Column j belongs to `dmu_ids[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeaDataset {
    pub dmu_ids: Vec<String>,
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    inputs: Vec<Vec<f64>>,
    outputs: Vec<Vec<f64>>,
}

/// One positivity shift applied by [`DeaDataset::translated`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationNote {
    pub variable: String,
    pub is_input: bool,
    pub shift: f64,
}

impl DeaDataset {
    pub fn new(
        dmu_ids: Vec<String>,
        input_names: Vec<String>,
        inputs: Vec<Vec<f64>>,
        output_names: Vec<String>,
        outputs: Vec<Vec<f64>>,
    ) -> Result<Self, DeaError> {
        let n = dmu_ids.len();
        if n == 0 {
            return Err(DeaError::InvalidDataset("no decision-making units".into()));
        }
        if inputs.is_empty() || outputs.is_empty() {
            return Err(DeaError::InvalidDataset(
                "need at least one input and one output variable".into(),
            ));
        }
        if inputs.len() != input_names.len() || outputs.len() != output_names.len() {
            return Err(DeaError::InvalidDataset(
                "variable name count does not match matrix rows".into(),
            ));
        }
        for (name, row) in input_names.iter().zip(&inputs).chain(output_names.iter().zip(&outputs))
        {
            if row.len() != n {
                return Err(DeaError::InvalidDataset(format!(
                    "row '{name}' has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(bad) = row.iter().find(|v| !v.is_finite()) {
                return Err(DeaError::InvalidDataset(format!(
                    "row '{name}' contains non-finite value {bad}"
                )));
            }
        }
        Ok(Self {
            dmu_ids,
            input_names,
            output_names,
            inputs,
            outputs,
        })
    }

    pub fn num_dmus(&self) -> usize {
        self.dmu_ids.len()
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn input(&self, i: usize, j: usize) -> f64 {
        self.inputs[i][j]
    }

    pub fn output(&self, r: usize, j: usize) -> f64 {
        self.outputs[r][j]
    }

    pub fn input_column(&self, j: usize) -> Vec<f64> {
        self.inputs.iter().map(|row| row[j]).collect()
    }

    pub fn output_column(&self, j: usize) -> Vec<f64> {
        self.outputs.iter().map(|row| row[j]).collect()
    }

    /// Rejects nonpositive entries, naming the first offending variable/unit.
    pub fn validate_positive(&self) -> Result<(), DeaError> {
        let rows = self
            .input_names
            .iter()
            .zip(&self.inputs)
            .chain(self.output_names.iter().zip(&self.outputs));
        for (name, row) in rows {
            for (j, v) in row.iter().enumerate() {
                if *v <= 0.0 {
                    return Err(DeaError::PositivityViolation {
                        dmu_id: self.dmu_ids[j].clone(),
                        variable: name.clone(),
                        value: *v,
                    });
                }
            }
        }
        Ok(())
    }

    /// Shifts every variable with a nonpositive entry by |min| + 1 so all
    /// values become strictly positive. Scores computed on the translated
    /// data are not comparable to untranslated runs; the notes exist so
    /// reports can say exactly what moved.
    pub fn translated(&self) -> (DeaDataset, Vec<TranslationNote>) {
        let mut out = self.clone();
        let mut notes = Vec::new();
        let mut fix = |names: &[String], rows: &mut Vec<Vec<f64>>, is_input: bool| {
            for (name, row) in names.iter().zip(rows.iter_mut()) {
                let min = row.iter().cloned().fold(f64::INFINITY, f64::min);
                if min <= 0.0 {
                    let shift = min.abs() + 1.0;
                    for v in row.iter_mut() {
                        *v += shift;
                    }
                    notes.push(TranslationNote {
                        variable: name.clone(),
                        is_input,
                        shift,
                    });
                }
            }
        };
        fix(&self.input_names, &mut out.inputs, true);
        fix(&self.output_names, &mut out.outputs, false);
        (out, notes)
    }
}

/// Per-unit outcome: radial score in (0, 1], virtual weights, peers with
/// intensities, and the frontier projection point.
#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyResult {
    pub dmu_id: String,
    pub score: f64,
    pub input_weights: Vec<f64>,
    pub output_weights: Vec<f64>,
    pub reference_set: Vec<(String, f64)>,
    pub projection_inputs: Vec<f64>,
    pub projection_outputs: Vec<f64>,
    pub scenario_name: String,
}

#[derive(Debug, Error)]
pub enum DeaError {
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("nonpositive value {value} in '{variable}' for '{dmu_id}' (strict positivity)")]
    PositivityViolation {
        dmu_id: String,
        variable: String,
        value: f64,
    },
    #[error("epsilon {0} outside [0, 1e-3]")]
    BadEpsilon(f64),
    #[error("unit index {index} out of range ({n} units)")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("{form} model for '{dmu_id}' came back {status}; this cannot happen for valid positive data and signals corrupt input")]
    InfeasibleModel {
        dmu_id: String,
        form: &'static str,
        status: String,
    },
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("scenario '{scenario}' failed for {} unit(s): {}", failures.len(), summarize(failures))]
    ScenarioFailures {
        scenario: String,
        failures: Vec<(String, String)>,
    },
}

fn summarize(failures: &[(String, String)]) -> String {
    failures
        .iter()
        .map(|(id, e)| format!("{id}: {e}"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Multiplier-form program for unit `j0`.
///
/// Variables are ordered `[u_1..u_t, v_1..v_m]` plus one trailing free
/// intercept under VRS. Input orientation maximizes the virtual output of
/// `j0` with its virtual input pinned to 1; output orientation is the
/// symmetric minimization. Every unit's virtual output may not exceed its
/// virtual input, and all weights carry the epsilon lower bound.
pub fn build_multiplier_lp(
    j0: usize,
    data: &DeaDataset,
    cfg: &DeaConfig,
) -> Result<LinearProgram, DeaError> {
    cfg.validate()?;
    check_index(j0, data)?;
    let (m, t, n) = (data.num_inputs(), data.num_outputs(), data.num_dmus());
    let vrs = cfg.returns_to_scale == Rts::Vrs;
    let nvars = t + m + usize::from(vrs);
    let omega = t + m;

    let mut objective = vec![0.0; nvars];
    let mut normalization = vec![0.0; nvars];
    match cfg.orientation {
        Orientation::Input => {
            for r in 0..t {
                objective[r] = data.output(r, j0);
            }
            for i in 0..m {
                normalization[t + i] = data.input(i, j0);
            }
        }
        Orientation::Output => {
            for i in 0..m {
                objective[t + i] = data.input(i, j0);
            }
            for r in 0..t {
                normalization[r] = data.output(r, j0);
            }
        }
    }
    if vrs {
        objective[omega] = 1.0;
    }

    let sense = match cfg.orientation {
        Orientation::Input => Sense::Maximize,
        Orientation::Output => Sense::Minimize,
    };
    let mut lp = LinearProgram::new(sense, objective);
    lp.lower_bounds = vec![cfg.epsilon; nvars];
    if vrs {
        lp.set_free(omega);
    }

    lp.push_constraint(normalization, Relation::Eq, 1.0);
    for j in 0..n {
        let mut row = vec![0.0; nvars];
        for r in 0..t {
            row[r] = data.output(r, j);
        }
        for i in 0..m {
            row[t + i] = -data.input(i, j);
        }
        if vrs {
            row[omega] = 1.0;
        }
        match cfg.orientation {
            // virtual output - virtual input (+ intercept) <= 0
            Orientation::Input => lp.push_constraint(row, Relation::Le, 0.0),
            // virtual input - virtual output (+ intercept) >= 0
            Orientation::Output => {
                let flipped: Vec<f64> = row
                    .iter()
                    .enumerate()
                    .map(|(k, v)| if vrs && k == omega { *v } else { -*v })
                    .collect();
                lp.push_constraint(flipped, Relation::Ge, 0.0);
            }
        }
    }
    Ok(lp)
}

/// Envelopment-form program for unit `j0` (the dual of the multiplier form
/// at epsilon zero). Variables are ordered `[theta_or_phi, lambda_1..lambda_n]`.
pub fn build_envelopment_lp(
    j0: usize,
    data: &DeaDataset,
    cfg: &DeaConfig,
) -> Result<LinearProgram, DeaError> {
    cfg.validate()?;
    check_index(j0, data)?;
    build_envelopment(j0, data, cfg, false)
}

fn build_envelopment(
    j0: usize,
    data: &DeaDataset,
    cfg: &DeaConfig,
    with_slacks: bool,
) -> Result<LinearProgram, DeaError> {
    let (m, t, n) = (data.num_inputs(), data.num_outputs(), data.num_dmus());
    let vrs = cfg.returns_to_scale == Rts::Vrs;
    let nvars = 1 + n + if with_slacks { m + t } else { 0 };
    let slack_in = |i: usize| 1 + n + i;
    let slack_out = |r: usize| 1 + n + m + r;

    let mut objective = vec![0.0; nvars];
    objective[0] = 1.0;
    let sense = match cfg.orientation {
        Orientation::Input => Sense::Minimize,
        Orientation::Output => Sense::Maximize,
    };
    let mut lp = LinearProgram::new(sense, objective);

    for i in 0..m {
        let mut row = vec![0.0; nvars];
        for j in 0..n {
            row[1 + j] = data.input(i, j);
        }
        match cfg.orientation {
            Orientation::Input => row[0] = -data.input(i, j0),
            Orientation::Output => {}
        }
        let rhs = match cfg.orientation {
            Orientation::Input => 0.0,
            Orientation::Output => data.input(i, j0),
        };
        if with_slacks {
            row[slack_in(i)] = 1.0;
            lp.push_constraint(row, Relation::Eq, rhs);
        } else {
            lp.push_constraint(row, Relation::Le, rhs);
        }
    }
    for r in 0..t {
        let mut row = vec![0.0; nvars];
        for j in 0..n {
            row[1 + j] = data.output(r, j);
        }
        match cfg.orientation {
            Orientation::Input => {}
            Orientation::Output => row[0] = -data.output(r, j0),
        }
        let rhs = match cfg.orientation {
            Orientation::Input => data.output(r, j0),
            Orientation::Output => 0.0,
        };
        if with_slacks {
            row[slack_out(r)] = -1.0;
            lp.push_constraint(row, Relation::Eq, rhs);
        } else {
            lp.push_constraint(row, Relation::Ge, rhs);
        }
    }
    if vrs {
        let mut row = vec![0.0; nvars];
        for j in 0..n {
            row[1 + j] = 1.0;
        }
        lp.push_constraint(row, Relation::Eq, 1.0);
    }
    Ok(lp)
}

fn check_index(j0: usize, data: &DeaDataset) -> Result<(), DeaError> {
    if j0 >= data.num_dmus() {
        return Err(DeaError::IndexOutOfRange {
            index: j0,
            n: data.num_dmus(),
        });
    }
    Ok(())
}

fn prepared(data: &DeaDataset, cfg: &DeaConfig) -> Result<DeaDataset, DeaError> {
    cfg.validate()?;
    match cfg.positivity {
        Positivity::Strict => {
            data.validate_positive()?;
            Ok(data.clone())
        }
        Positivity::Translate => Ok(data.translated().0),
    }
}

/// Scores unit `j0` against the whole dataset.
///
/// Under `Positivity::Translate` the solve happens in translated
/// coordinates and projections are reported in that space; callers that
/// need the shifts should translate up front via [`DeaDataset::translated`].
pub fn efficiency(
    j0: usize,
    data: &DeaDataset,
    cfg: &DeaConfig,
) -> Result<EfficiencyResult, DeaError> {
    check_index(j0, data)?;
    let prep = prepared(data, cfg)?;
    solve_unit(j0, &prep, cfg, "")
}

fn solve_unit(
    j0: usize,
    data: &DeaDataset,
    cfg: &DeaConfig,
    scenario_name: &str,
) -> Result<EfficiencyResult, DeaError> {
    let (m, t, n) = (data.num_inputs(), data.num_outputs(), data.num_dmus());
    let with_slacks = cfg.slack_stage == SlackStage::Maximize;
    let env = build_envelopment(j0, data, cfg, with_slacks)?;

    let sol = if with_slacks {
        // Second stage: maximize total slack at the fixed radial optimum.
        // Expressed in the program's own sense, so the coefficients flip
        // sign for the input-oriented minimization.
        let sign = match cfg.orientation {
            Orientation::Input => -1.0,
            Orientation::Output => 1.0,
        };
        let mut secondary = vec![0.0; env.num_vars()];
        for k in 1 + n..env.num_vars() {
            secondary[k] = sign;
        }
        lp::solve_lexicographic(&env, &secondary)?
    } else {
        lp::solve(&env)?
    };
    let primal = match sol.primal() {
        Some(p) => p.to_vec(),
        None => {
            return Err(DeaError::InfeasibleModel {
                dmu_id: data.dmu_ids[j0].clone(),
                form: "envelopment",
                status: format!("{:?}", sol.status),
            })
        }
    };

    let radial = primal[0];
    let score = match cfg.orientation {
        Orientation::Input => radial,
        Orientation::Output => 1.0 / radial,
    };

    let reference_set: Vec<(String, f64)> = (0..n)
        .filter(|j| primal[1 + j] > LAMBDA_TOL)
        .map(|j| (data.dmu_ids[j].clone(), primal[1 + j]))
        .collect();

    let x0 = data.input_column(j0);
    let y0 = data.output_column(j0);
    let (slack_in, slack_out): (Vec<f64>, Vec<f64>) = if with_slacks {
        (
            primal[1 + n..1 + n + m].to_vec(),
            primal[1 + n + m..1 + n + m + t].to_vec(),
        )
    } else {
        (vec![0.0; m], vec![0.0; t])
    };
    let (projection_inputs, projection_outputs) = match cfg.orientation {
        Orientation::Input => (
            x0.iter().zip(&slack_in).map(|(x, s)| radial * x - s).collect(),
            y0.iter().zip(&slack_out).map(|(y, s)| y + s).collect(),
        ),
        Orientation::Output => (
            x0.iter().zip(&slack_in).map(|(x, s)| x - s).collect(),
            y0.iter().zip(&slack_out).map(|(y, s)| radial * y + s).collect(),
        ),
    };

    let mult = lp::solve(&build_multiplier_lp(j0, data, cfg)?)?;
    let weights = match mult.primal() {
        Some(p) => p.to_vec(),
        None => {
            return Err(DeaError::InfeasibleModel {
                dmu_id: data.dmu_ids[j0].clone(),
                form: "multiplier",
                status: format!("{:?}", mult.status),
            })
        }
    };

    Ok(EfficiencyResult {
        dmu_id: data.dmu_ids[j0].clone(),
        score,
        output_weights: weights[..t].to_vec(),
        input_weights: weights[t..t + m].to_vec(),
        reference_set,
        projection_inputs,
        projection_outputs,
        scenario_name: scenario_name.to_string(),
    })
}

/// Scores every unit in the dataset. Results follow `dmu_ids` order; if any
/// unit fails, the whole scenario is reported failed with every offender
/// named.
pub fn run_scenario(
    data: &DeaDataset,
    cfg: &DeaConfig,
    scenario_name: &str,
) -> Result<Vec<EfficiencyResult>, DeaError> {
    let prep = prepared(data, cfg)?;
    let mut results = Vec::with_capacity(prep.num_dmus());
    let mut failures = Vec::new();
    for j0 in 0..prep.num_dmus() {
        match solve_unit(j0, &prep, cfg, scenario_name) {
            Ok(r) => results.push(r),
            Err(e) => failures.push((prep.dmu_ids[j0].clone(), e.to_string())),
        }
    }
    if !failures.is_empty() {
        return Err(DeaError::ScenarioFailures {
            scenario: scenario_name.to_string(),
            failures,
        });
    }
    Ok(results)
}

/// Competition ranking ("1, 1, 3") on descending score. Ties share the
/// smallest rank; the returned list is ordered by descending score with
/// `dmu_id` breaking ties so output is deterministic.
pub fn rank(results: &[EfficiencyResult]) -> Vec<(String, usize)> {
    let mut order: Vec<&EfficiencyResult> = results.iter().collect();
    order.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .expect("scores are finite")
            .then_with(|| a.dmu_id.cmp(&b.dmu_id))
    });
    let mut ranked = Vec::with_capacity(order.len());
    let mut current_rank = 1usize;
    for (pos, r) in order.iter().enumerate() {
        if pos > 0 && r.score != order[pos - 1].score {
            current_rank = pos + 1;
        }
        ranked.push((r.dmu_id.clone(), current_rank));
    }
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(inputs: Vec<Vec<f64>>, outputs: Vec<Vec<f64>>) -> DeaDataset {
        let n = inputs[0].len();
        let ids = (0..n).map(|j| format!("dmu{j}")).collect();
        let in_names = (0..inputs.len()).map(|i| format!("in{i}")).collect();
        let out_names = (0..outputs.len()).map(|r| format!("out{r}")).collect();
        DeaDataset::new(ids, in_names, inputs, out_names, outputs).unwrap()
    }

    fn cfg() -> DeaConfig {
        DeaConfig {
            epsilon: 0.0,
            ..DeaConfig::default()
        }
    }

    #[test]
    fn multiplier_lp_shape_crs() {
        let data = dataset(vec![vec![1.0, 2.0]], vec![vec![1.0, 1.0]]);
        let lp = build_multiplier_lp(0, &data, &cfg()).unwrap();
        assert_eq!(lp.num_vars(), 2); // u, v
        assert_eq!(lp.constraints.len(), 3); // normalization + one per unit
        assert_eq!(lp.constraints[0].relation, Relation::Eq);
    }

    #[test]
    fn multiplier_lp_vrs_adds_free_intercept() {
        let data = dataset(vec![vec![1.0, 2.0]], vec![vec![1.0, 1.0]]);
        let mut c = cfg();
        c.returns_to_scale = Rts::Vrs;
        let lp = build_multiplier_lp(0, &data, &c).unwrap();
        assert_eq!(lp.num_vars(), 3);
        assert_eq!(lp.lower_bounds[2], f64::NEG_INFINITY);
    }

    #[test]
    fn multiplier_lp_epsilon_becomes_lower_bound() {
        let data = dataset(vec![vec![1.0, 2.0]], vec![vec![1.0, 1.0]]);
        let mut c = cfg();
        c.epsilon = 0.001;
        let lp = build_multiplier_lp(0, &data, &c).unwrap();
        assert_eq!(lp.lower_bounds, vec![0.001, 0.001]);
    }

    #[test]
    fn envelopment_lp_shape() {
        let data = dataset(vec![vec![1.0, 2.0]], vec![vec![1.0, 1.0]]);
        let lp = build_envelopment_lp(0, &data, &cfg()).unwrap();
        assert_eq!(lp.num_vars(), 3); // theta, lambda1, lambda2
        assert_eq!(lp.sense, Sense::Minimize);
        assert_eq!(lp.constraints.len(), 2);

        let mut c = cfg();
        c.returns_to_scale = Rts::Vrs;
        let lp = build_envelopment_lp(0, &data, &c).unwrap();
        assert_eq!(lp.constraints.len(), 3); // + convexity row

        let mut c = cfg();
        c.orientation = Orientation::Output;
        let lp = build_envelopment_lp(0, &data, &c).unwrap();
        assert_eq!(lp.sense, Sense::Maximize);
    }

    #[test]
    fn single_ratio_pair() {
        // Unit productivities 1 and 0.5: scores 1.0 and 0.5 under CRS.
        let data = dataset(vec![vec![1.0, 2.0]], vec![vec![1.0, 1.0]]);
        let a = efficiency(0, &data, &cfg()).unwrap();
        let b = efficiency(1, &data, &cfg()).unwrap();
        assert!((a.score - 1.0).abs() < 1e-9);
        assert!((b.score - 0.5).abs() < 1e-9);
    }

    #[test]
    fn three_unit_hand_case_crs_and_vrs() {
        let data = dataset(vec![vec![1.0, 2.0, 4.0]], vec![vec![1.0, 3.0, 4.0]]);
        let expected_crs = [2.0 / 3.0, 1.0, 2.0 / 3.0];
        for (j, want) in expected_crs.iter().enumerate() {
            let r = efficiency(j, &data, &cfg()).unwrap();
            assert!(
                (r.score - want).abs() < 1e-7,
                "crs unit {j}: {} vs {want}",
                r.score
            );
        }
        let mut c = cfg();
        c.returns_to_scale = Rts::Vrs;
        for j in 0..3 {
            let r = efficiency(j, &data, &c).unwrap();
            assert!((r.score - 1.0).abs() < 1e-7, "vrs unit {j}: {}", r.score);
        }
    }

    #[test]
    fn dominant_unit_scores_one() {
        // dmu0 produces more with less across the board.
        let data = dataset(
            vec![vec![1.0, 2.0, 3.0], vec![1.0, 3.0, 2.0]],
            vec![vec![5.0, 4.0, 3.0]],
        );
        let r = efficiency(0, &data, &cfg()).unwrap();
        assert!((r.score - 1.0).abs() < 1e-9);
        assert_eq!(r.reference_set.len(), 1);
        assert_eq!(r.reference_set[0].0, "dmu0");
    }

    #[test]
    fn output_orientation_scores_match_input_under_crs() {
        // Under constant returns to scale 1/phi equals theta.
        let data = dataset(
            vec![vec![2.0, 3.0, 5.0], vec![1.0, 2.0, 2.0]],
            vec![vec![2.0, 4.0, 3.0]],
        );
        let mut out_cfg = cfg();
        out_cfg.orientation = Orientation::Output;
        for j in 0..3 {
            let a = efficiency(j, &data, &cfg()).unwrap();
            let b = efficiency(j, &data, &out_cfg).unwrap();
            assert!(
                (a.score - b.score).abs() < 1e-7,
                "unit {j}: {} vs {}",
                a.score,
                b.score
            );
        }
    }

    #[test]
    fn efficient_unit_projects_onto_itself() {
        let data = dataset(vec![vec![1.0, 2.0]], vec![vec![1.0, 1.0]]);
        let r = efficiency(0, &data, &cfg()).unwrap();
        assert!((r.projection_inputs[0] - 1.0).abs() < 1e-6);
        assert!((r.projection_outputs[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn slack_stage_cleans_up_weak_efficiency() {
        // dmu0 matches dmu1 on input 2 and output but wastes input 1: the
        // radial score is 1 with a pure input-1 slack of 1.
        let data = dataset(
            vec![vec![2.0, 1.0], vec![1.0, 1.0]],
            vec![vec![1.0, 1.0]],
        );
        let radial = efficiency(0, &data, &cfg()).unwrap();
        assert!((radial.score - 1.0).abs() < 1e-9);
        assert!((radial.projection_inputs[0] - 2.0).abs() < 1e-9);

        let mut c = cfg();
        c.slack_stage = SlackStage::Maximize;
        let adjusted = efficiency(0, &data, &c).unwrap();
        assert!((adjusted.score - 1.0).abs() < 1e-9);
        assert!((adjusted.projection_inputs[0] - 1.0).abs() < 1e-7);
        assert!((adjusted.projection_inputs[1] - 1.0).abs() < 1e-7);
        assert_eq!(adjusted.reference_set.len(), 1);
        assert_eq!(adjusted.reference_set[0].0, "dmu1");
    }

    #[test]
    fn run_scenario_covers_every_unit_in_order() {
        let data = dataset(vec![vec![1.0, 2.0, 4.0]], vec![vec![1.0, 3.0, 4.0]]);
        let results = run_scenario(&data, &cfg(), "demo").unwrap();
        assert_eq!(results.len(), 3);
        let ids: Vec<&str> = results.iter().map(|r| r.dmu_id.as_str()).collect();
        assert_eq!(ids, vec!["dmu0", "dmu1", "dmu2"]);
        assert!(results.iter().all(|r| r.scenario_name == "demo"));
    }

    #[test]
    fn single_unit_is_its_own_frontier() {
        let data = dataset(vec![vec![3.0]], vec![vec![2.0]]);
        let results = run_scenario(&data, &cfg(), "solo").unwrap();
        assert!((results[0].score - 1.0).abs() < 1e-9);
    }

    #[test]
    fn strict_mode_names_the_offender() {
        let data = dataset(vec![vec![1.0, -0.5]], vec![vec![1.0, 1.0]]);
        let err = run_scenario(&data, &cfg(), "bad").unwrap_err();
        match err {
            DeaError::PositivityViolation {
                dmu_id, variable, ..
            } => {
                assert_eq!(dmu_id, "dmu1");
                assert_eq!(variable, "in0");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn translate_mode_shifts_and_solves() {
        let data = dataset(vec![vec![1.0, 2.0]], vec![vec![-0.5, 1.0]]);
        let (shifted, notes) = data.translated();
        assert_eq!(notes.len(), 1);
        assert_eq!(notes[0].variable, "out0");
        assert!((notes[0].shift - 1.5).abs() < 1e-12);
        assert!((shifted.output(0, 0) - 1.0).abs() < 1e-12);

        let mut c = cfg();
        c.positivity = Positivity::Translate;
        let results = run_scenario(&data, &c, "shifted").unwrap();
        assert_eq!(results.len(), 2);
        assert!(results.iter().all(|r| r.score > 0.0 && r.score <= 1.0 + 1e-9));
    }

    #[test]
    fn vrs_reference_intensities_sum_to_one() {
        let data = dataset(
            vec![vec![1.0, 2.0, 4.0, 3.0]],
            vec![vec![1.0, 3.0, 4.0, 2.0]],
        );
        let mut c = cfg();
        c.returns_to_scale = Rts::Vrs;
        for r in run_scenario(&data, &c, "vrs").unwrap() {
            let total: f64 = r.reference_set.iter().map(|(_, l)| l).sum();
            assert!((total - 1.0).abs() < 1e-7, "{}: {total}", r.dmu_id);
        }
    }

    #[test]
    fn rank_competition_style() {
        let mk = |id: &str, score: f64| EfficiencyResult {
            dmu_id: id.into(),
            score,
            input_weights: vec![],
            output_weights: vec![],
            reference_set: vec![],
            projection_inputs: vec![],
            projection_outputs: vec![],
            scenario_name: String::new(),
        };
        let ranks = rank(&[mk("a", 1.0), mk("b", 1.0), mk("c", 0.9)]);
        assert_eq!(
            ranks,
            vec![("a".into(), 1), ("b".into(), 1), ("c".into(), 3)]
        );

        let ranks = rank(&[mk("a", 0.5), mk("b", 0.9), mk("c", 0.7)]);
        assert_eq!(
            ranks,
            vec![("b".into(), 1), ("c".into(), 2), ("a".into(), 3)]
        );

        let ranks = rank(&[mk("only", 0.42)]);
        assert_eq!(ranks, vec![("only".into(), 1)]);
    }

    #[test]
    fn per_unit_failures_are_aggregated_with_ids() {
        // With the weight floor at its maximum, a unit whose inputs are
        // huge cannot normalize its virtual input to 1: the multiplier
        // model is infeasible and the scenario reports the offender.
        let data = dataset(vec![vec![5000.0, 6000.0]], vec![vec![1.0, 1.0]]);
        let mut c = cfg();
        c.epsilon = 1e-3;
        let err = run_scenario(&data, &c, "overconstrained").unwrap_err();
        match err {
            DeaError::ScenarioFailures { scenario, failures } => {
                assert_eq!(scenario, "overconstrained");
                assert_eq!(failures.len(), 2);
                assert_eq!(failures[0].0, "dmu0");
                assert!(failures[0].1.contains("multiplier"));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn epsilon_out_of_range_rejected() {
        let data = dataset(vec![vec![1.0]], vec![vec![1.0]]);
        let mut c = cfg();
        c.epsilon = 0.01;
        assert!(matches!(
            efficiency(0, &data, &c),
            Err(DeaError::BadEpsilon(_))
        ));
    }
}
