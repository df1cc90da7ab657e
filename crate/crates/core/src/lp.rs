//! Dense two-phase simplex solver.
//!
//! Solves small linear programs in the general form
//!
//! ```text
//! max/min  c'x
//! s.t.     a_i'x  {<=, =, >=}  b_i     for every constraint i
//!          x_j >= l_j                  (l_j may be -inf for free variables)
//! ```
//!
//! Dantzig pricing with a switch to Bland's rule after `2*(m+n)` iterations
//! keeps pivoting fast on non-degenerate instances while guaranteeing
//! termination. Everything is deterministic: identical programs produce
//! bit-identical solutions.

#![allow(clippy::needless_range_loop)] // index-parallel matrix rows read clearest

use thiserror::Error;

/// Eligibility threshold for pivot elements and reduced costs.
const PIVOT_TOL: f64 = 1e-9;
/// Phase-1 residual above which the program is declared infeasible.
const FEAS_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

/// One linear constraint `coeffs' x  relation  rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

/// A linear program over `n` variables with per-variable lower bounds.
///
/// Lower bounds default to zero; `f64::NEG_INFINITY` marks a free variable,
/// which the solver splits into a difference of two nonnegative variables.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    pub lower_bounds: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum LpError {
    /// Dimension mismatch or non-finite entry. Signals a caller bug and is
    /// never patched over.
    #[error("malformed program: {0}")]
    Malformed(String),
    #[error("simplex did not converge within {0} iterations")]
    IterationLimit(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpStatus {
    Optimal { objective: f64, primal: Vec<f64> },
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        matches!(self.status, LpStatus::Optimal { .. })
    }

    pub fn objective_value(&self) -> Option<f64> {
        match &self.status {
            LpStatus::Optimal { objective, .. } => Some(*objective),
            _ => None,
        }
    }

    pub fn primal(&self) -> Option<&[f64]> {
        match &self.status {
            LpStatus::Optimal { primal, .. } => Some(primal),
            _ => None,
        }
    }
}

impl LinearProgram {
    /// New program with all lower bounds at zero.
    pub fn new(sense: Sense, objective: Vec<f64>) -> Self {
        let n = objective.len();
        Self {
            sense,
            objective,
            constraints: Vec::new(),
            lower_bounds: vec![0.0; n],
        }
    }

    pub fn push_constraint(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Marks variable `j` as free (unrestricted in sign).
    pub fn set_free(&mut self, j: usize) {
        self.lower_bounds[j] = f64::NEG_INFINITY;
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        if n == 0 {
            return Err(LpError::Malformed("program has no variables".into()));
        }
        if self.lower_bounds.len() != n {
            return Err(LpError::Malformed(format!(
                "lower bound vector has length {}, expected {}",
                self.lower_bounds.len(),
                n
            )));
        }
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(LpError::Malformed(format!(
                    "objective coefficient {j} is not finite"
                )));
            }
        }
        for (j, l) in self.lower_bounds.iter().enumerate() {
            if l.is_nan() || *l == f64::INFINITY {
                return Err(LpError::Malformed(format!(
                    "lower bound {j} must be finite or -inf"
                )));
            }
        }
        for (i, con) in self.constraints.iter().enumerate() {
            if con.coeffs.len() != n {
                return Err(LpError::Malformed(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    con.coeffs.len()
                )));
            }
            if !con.rhs.is_finite() {
                return Err(LpError::Malformed(format!("constraint {i} rhs is not finite")));
            }
            if con.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(LpError::Malformed(format!(
                    "constraint {i} has a non-finite coefficient"
                )));
            }
        }
        Ok(())
    }

    /// Largest constraint violation of `x`, together with the largest
    /// lower-bound violation. Useful for post-solve sanity checks.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for con in &self.constraints {
            let lhs: f64 = con.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let viol = match con.relation {
                Relation::Le => lhs - con.rhs,
                Relation::Ge => con.rhs - lhs,
                Relation::Eq => (lhs - con.rhs).abs(),
            };
            worst = worst.max(viol);
        }
        for (xj, lj) in x.iter().zip(&self.lower_bounds) {
            if lj.is_finite() {
                worst = worst.max(lj - xj);
            }
        }
        worst
    }
}

/// Solves `lp` to optimality, or reports infeasibility/unboundedness.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let mut tableau = Tableau::build(lp);
    let iterations = tableau.run()?;
    Ok(match tableau.outcome {
        Outcome::Optimal => {
            let primal = tableau.extract_primal(lp);
            let raw: f64 = lp
                .objective
                .iter()
                .zip(&primal)
                .map(|(c, x)| c * x)
                .sum();
            LpSolution {
                status: LpStatus::Optimal {
                    objective: raw,
                    primal,
                },
                iterations,
            }
        }
        Outcome::Infeasible => LpSolution {
            status: LpStatus::Infeasible,
            iterations,
        },
        Outcome::Unbounded => LpSolution {
            status: LpStatus::Unbounded,
            iterations,
        },
    })
}

/// Solves `lp`, then re-optimizes `secondary` over the primary optimal face.
///
/// The primary optimum is pinned by appending the primary objective as an
/// equality constraint at its optimal value before the second solve. The
/// secondary objective is interpreted under the same sense as the program.
pub fn solve_lexicographic(
    lp: &LinearProgram,
    secondary_objective: &[f64],
) -> Result<LpSolution, LpError> {
    if secondary_objective.len() != lp.num_vars() {
        return Err(LpError::Malformed(format!(
            "secondary objective has length {}, expected {}",
            secondary_objective.len(),
            lp.num_vars()
        )));
    }
    let first = solve(lp)?;
    let z_star = match first.objective_value() {
        Some(z) => z,
        None => return Ok(first),
    };
    let mut second = lp.clone();
    second.push_constraint(lp.objective.clone(), Relation::Eq, z_star);
    second.objective = secondary_objective.to_vec();
    let mut refined = solve(&second)?;
    refined.iterations += first.iterations;
    if !refined.is_optimal() {
        // The pinned face is nonempty by construction; only numerical noise
        // can make it unreachable, in which case the first solution stands.
        return Ok(first);
    }
    Ok(refined)
}

enum Outcome {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Column roles after conversion to computational standard form.
#[derive(Clone, Copy, PartialEq)]
enum Col {
    /// Shifted original variable (index into the original program).
    Plus(usize),
    /// Negative part of a free variable.
    Minus(usize),
    Slack,
    Artificial,
}

struct Tableau {
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    basis: Vec<usize>,
    cols: Vec<Col>,
    /// Objective in computational form (always maximized).
    cost: Vec<f64>,
    outcome: Outcome,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.num_vars();

        // Column layout: one column per original variable, an extra column
        // for the negative part of each free variable, then slack/surplus
        // and artificial columns per constraint.
        let mut cols: Vec<Col> = Vec::new();
        let mut plus_col = vec![0usize; n];
        let mut minus_col: Vec<Option<usize>> = vec![None; n];
        for j in 0..n {
            plus_col[j] = cols.len();
            cols.push(Col::Plus(j));
        }
        for j in 0..n {
            if lp.lower_bounds[j] == f64::NEG_INFINITY {
                minus_col[j] = Some(cols.len());
                cols.push(Col::Minus(j));
            }
        }

        // Shift x_j = y_j + l_j for finite bounds so every column is >= 0.
        let shift: Vec<f64> = lp
            .lower_bounds
            .iter()
            .map(|l| if l.is_finite() { *l } else { 0.0 })
            .collect();

        let m = lp.constraints.len();
        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(m);
        let mut rhs: Vec<f64> = Vec::with_capacity(m);
        let mut relations: Vec<Relation> = Vec::with_capacity(m);
        for con in &lp.constraints {
            let mut row = vec![0.0; cols.len()];
            for j in 0..n {
                row[plus_col[j]] = con.coeffs[j];
                if let Some(mc) = minus_col[j] {
                    row[mc] = -con.coeffs[j];
                }
            }
            let adjust: f64 = con.coeffs.iter().zip(&shift).map(|(a, l)| a * l).sum();
            let mut b = con.rhs - adjust;
            let mut rel = con.relation;
            if b < 0.0 {
                for v in row.iter_mut() {
                    *v = -*v;
                }
                b = -b;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            rows.push(row);
            rhs.push(b);
            relations.push(rel);
        }

        // Slack, surplus and artificial columns; artificials start basic.
        let mut basis = vec![usize::MAX; m];
        for (i, rel) in relations.iter().enumerate() {
            match rel {
                Relation::Le => {
                    let c = cols.len();
                    cols.push(Col::Slack);
                    for (k, row) in rows.iter_mut().enumerate() {
                        row.push(if k == i { 1.0 } else { 0.0 });
                    }
                    basis[i] = c;
                }
                Relation::Ge => {
                    cols.push(Col::Slack);
                    for (k, row) in rows.iter_mut().enumerate() {
                        row.push(if k == i { -1.0 } else { 0.0 });
                    }
                }
                Relation::Eq => {}
            }
        }
        for (i, rel) in relations.iter().enumerate() {
            if matches!(rel, Relation::Ge | Relation::Eq) {
                let c = cols.len();
                cols.push(Col::Artificial);
                for (k, row) in rows.iter_mut().enumerate() {
                    row.push(if k == i { 1.0 } else { 0.0 });
                }
                basis[i] = c;
            }
        }

        // Computational objective: maximize. Minimization flips signs here
        // and the reported objective is recomputed from the primal later.
        let sign = match lp.sense {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        let mut cost = vec![0.0; cols.len()];
        for j in 0..n {
            cost[plus_col[j]] = sign * lp.objective[j];
            if let Some(mc) = minus_col[j] {
                cost[mc] = -sign * lp.objective[j];
            }
        }

        Tableau {
            a: rows,
            b: rhs,
            basis,
            cols,
            cost,
            outcome: Outcome::Optimal,
        }
    }

    fn run(&mut self) -> Result<usize, LpError> {
        let mut iterations = 0;

        let needs_phase1 = self.cols.contains(&Col::Artificial);
        if needs_phase1 {
            // Phase 1: maximize -(sum of artificials). With the artificials
            // basic, the reduced cost of column j is the sum of a_ij over the
            // artificial rows, and the objective starts at -(sum of b_i).
            let mut phase1 = vec![0.0; self.cols.len()];
            let mut value = 0.0;
            for (i, &bi) in self.basis.iter().enumerate() {
                if self.cols[bi] == Col::Artificial {
                    for (j, v) in phase1.iter_mut().enumerate() {
                        *v += self.a[i][j];
                    }
                    value -= self.b[i];
                }
            }
            for (j, v) in phase1.iter_mut().enumerate() {
                if self.cols[j] == Col::Artificial {
                    *v = 0.0;
                }
            }
            iterations += self.optimize(&mut phase1, &mut value)?;
            if value < -FEAS_TOL {
                self.outcome = Outcome::Infeasible;
                return Ok(iterations);
            }
            self.evict_artificials();
        }

        // Phase 2 over the real objective, artificial columns banned.
        let mut reduced = self.cost.clone();
        let mut value = 0.0;
        for (i, &bi) in self.basis.iter().enumerate() {
            let cb = self.cost[bi];
            if cb != 0.0 {
                for (j, r) in reduced.iter_mut().enumerate() {
                    *r -= cb * self.a[i][j];
                }
                value += cb * self.b[i];
            }
        }
        iterations += self.optimize(&mut reduced, &mut value)?;
        Ok(iterations)
    }

    /// Primal simplex loop over the current tableau. `reduced` holds the
    /// reduced costs of a maximization objective. Artificial columns never
    /// enter: they start basic in phase 1 and stay out once evicted.
    fn optimize(&mut self, reduced: &mut [f64], value: &mut f64) -> Result<usize, LpError> {
        let m = self.a.len();
        let ncols = self.cols.len();
        let bland_after = 2 * (m + ncols);
        let cap = 200 * (m + ncols + 10);
        let mut iter = 0;

        loop {
            let enterable = |j: usize| -> bool {
                self.cols[j] != Col::Artificial && reduced[j] > PIVOT_TOL
            };

            // Entering column: Dantzig (largest reduced cost, lowest index on
            // ties) then Bland (lowest index) once the iteration budget for
            // fast pricing is spent.
            let entering = if iter < bland_after {
                let mut best: Option<usize> = None;
                for j in 0..ncols {
                    if enterable(j) && best.is_none_or(|b| reduced[j] > reduced[b]) {
                        best = Some(j);
                    }
                }
                best
            } else {
                (0..ncols).find(|&j| enterable(j))
            };
            let entering = match entering {
                Some(j) => j,
                None => return Ok(iter),
            };

            // Ratio test; ties resolved by the lowest basis variable index so
            // the pivot sequence is reproducible.
            let mut leaving: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for i in 0..m {
                let aij = self.a[i][entering];
                if aij > PIVOT_TOL {
                    let ratio = self.b[i] / aij;
                    let better = match leaving {
                        None => true,
                        Some(cur) => {
                            ratio < best_ratio - PIVOT_TOL
                                || (ratio < best_ratio + PIVOT_TOL
                                    && self.basis[i] < self.basis[cur])
                        }
                    };
                    if better {
                        best_ratio = ratio;
                        leaving = Some(i);
                    }
                }
            }
            let leaving = match leaving {
                Some(i) => i,
                None => {
                    self.outcome = Outcome::Unbounded;
                    return Ok(iter);
                }
            };

            self.pivot(leaving, entering, reduced, value);
            iter += 1;
            if iter > cap {
                return Err(LpError::IterationLimit(iter));
            }
        }
    }

    fn pivot(&mut self, row: usize, col: usize, reduced: &mut [f64], value: &mut f64) {
        let m = self.a.len();
        let ncols = self.cols.len();
        let p = self.a[row][col];
        for j in 0..ncols {
            self.a[row][j] /= p;
        }
        self.b[row] /= p;
        for i in 0..m {
            if i == row {
                continue;
            }
            let f = self.a[i][col];
            if f != 0.0 {
                for j in 0..ncols {
                    self.a[i][j] -= f * self.a[row][j];
                }
                self.b[i] -= f * self.b[row];
            }
        }
        let f = reduced[col];
        if f != 0.0 {
            for j in 0..ncols {
                reduced[j] -= f * self.a[row][j];
            }
            *value += f * self.b[row];
        }
        self.basis[row] = col;
    }

    /// Pivots leftover artificials out of the (degenerate) phase-1 basis;
    /// rows with no eligible pivot are redundant and dropped.
    fn evict_artificials(&mut self) {
        let mut i = 0;
        while i < self.a.len() {
            if self.cols[self.basis[i]] != Col::Artificial {
                i += 1;
                continue;
            }
            let pivot_col = (0..self.cols.len())
                .find(|&j| self.cols[j] != Col::Artificial && self.a[i][j].abs() > PIVOT_TOL);
            match pivot_col {
                Some(col) => {
                    let mut dummy = vec![0.0; self.cols.len()];
                    let mut dv = 0.0;
                    self.pivot(i, col, &mut dummy, &mut dv);
                    i += 1;
                }
                None => {
                    self.a.remove(i);
                    self.b.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }

    fn extract_primal(&self, lp: &LinearProgram) -> Vec<f64> {
        let n = lp.num_vars();
        let mut x: Vec<f64> = lp
            .lower_bounds
            .iter()
            .map(|l| if l.is_finite() { *l } else { 0.0 })
            .collect();
        for (i, &bi) in self.basis.iter().enumerate() {
            match self.cols[bi] {
                Col::Plus(j) => x[j] += self.b[i],
                Col::Minus(j) => x[j] -= self.b[i],
                _ => {}
            }
        }
        debug_assert!(x.len() == n);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn single_bound_binds() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.push_constraint(vec![1.0], Relation::Le, 5.0);
        let sol = solve(&lp).unwrap();
        assert_close(sol.objective_value().unwrap(), 5.0, 1e-9);
        assert_close(sol.primal().unwrap()[0], 5.0, 1e-9);
    }

    #[test]
    fn contradictory_bounds_infeasible() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.push_constraint(vec![1.0], Relation::Ge, 1.0);
        lp.push_constraint(vec![1.0], Relation::Le, 0.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn degenerate_optimal_face_has_unique_objective() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.push_constraint(vec![1.0, 1.0], Relation::Le, 1.0);
        let sol = solve(&lp).unwrap();
        assert_close(sol.objective_value().unwrap(), 1.0, 1e-9);
    }

    #[test]
    fn unbounded_detected() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 0.0]);
        lp.push_constraint(vec![0.0, 1.0], Relation::Le, 1.0);
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Unbounded);
    }

    #[test]
    fn minimization_with_ge_rows() {
        // min 4x + 3y  s.t. 2x + y >= 8, x + y >= 6, x + 2y >= 8
        let mut lp = LinearProgram::new(Sense::Minimize, vec![4.0, 3.0]);
        lp.push_constraint(vec![2.0, 1.0], Relation::Ge, 8.0);
        lp.push_constraint(vec![1.0, 1.0], Relation::Ge, 6.0);
        lp.push_constraint(vec![1.0, 2.0], Relation::Ge, 8.0);
        let sol = solve(&lp).unwrap();
        assert_close(sol.objective_value().unwrap(), 20.0, 1e-7);
    }

    #[test]
    fn equality_constraints_handled() {
        // max x + 2y s.t. x + y = 4, x - y <= 2
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 2.0]);
        lp.push_constraint(vec![1.0, 1.0], Relation::Eq, 4.0);
        lp.push_constraint(vec![1.0, -1.0], Relation::Le, 2.0);
        let sol = solve(&lp).unwrap();
        // y as large as possible on x + y = 4: x = 0, y = 4.
        assert_close(sol.objective_value().unwrap(), 8.0, 1e-7);
        let x = sol.primal().unwrap();
        assert_close(x[0], 0.0, 1e-7);
        assert_close(x[1], 4.0, 1e-7);
    }

    #[test]
    fn free_variable_goes_negative() {
        // min y s.t. y >= -3 expressed via a free variable and a Ge row.
        let mut lp = LinearProgram::new(Sense::Minimize, vec![1.0]);
        lp.set_free(0);
        lp.push_constraint(vec![1.0], Relation::Ge, -3.0);
        let sol = solve(&lp).unwrap();
        assert_close(sol.objective_value().unwrap(), -3.0, 1e-9);
        assert_close(sol.primal().unwrap()[0], -3.0, 1e-9);
    }

    #[test]
    fn nonzero_lower_bounds_respected() {
        // max -x - y with x, y >= 0.25 and x + y >= 1: optimum at any point
        // with x + y = 1 above the bounds.
        let mut lp = LinearProgram::new(Sense::Maximize, vec![-1.0, -1.0]);
        lp.lower_bounds = vec![0.25, 0.25];
        lp.push_constraint(vec![1.0, 1.0], Relation::Ge, 1.0);
        let sol = solve(&lp).unwrap();
        assert_close(sol.objective_value().unwrap(), -1.0, 1e-9);
        let x = sol.primal().unwrap();
        assert!(x[0] >= 0.25 - 1e-9 && x[1] >= 0.25 - 1e-9);
    }

    #[test]
    fn lexicographic_independent_objectives() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 0.0]);
        lp.push_constraint(vec![1.0, 0.0], Relation::Le, 1.0);
        lp.push_constraint(vec![0.0, 1.0], Relation::Le, 1.0);
        let sol = solve_lexicographic(&lp, &[0.0, 1.0]).unwrap();
        let x = sol.primal().unwrap();
        assert_close(x[0], 1.0, 1e-7);
        assert_close(x[1], 1.0, 1e-7);
    }

    #[test]
    fn lexicographic_resolves_degenerate_face() {
        // Primary max x + y on x + y <= 1 leaves the whole segment optimal;
        // the optimal face has vertices (1,0) and (0,1), so maximizing y as
        // the secondary objective must land on (0,1).
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.push_constraint(vec![1.0, 1.0], Relation::Le, 1.0);
        let sol = solve_lexicographic(&lp, &[0.0, 1.0]).unwrap();
        let x = sol.primal().unwrap();
        assert_close(x[0], 0.0, 1e-7);
        assert_close(x[1], 1.0, 1e-7);
    }

    #[test]
    fn lexicographic_propagates_infeasibility() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.push_constraint(vec![1.0], Relation::Ge, 2.0);
        lp.push_constraint(vec![1.0], Relation::Le, 1.0);
        let sol = solve_lexicographic(&lp, &[1.0]).unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn lexicographic_rejects_mismatched_secondary() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 1.0]);
        lp.push_constraint(vec![1.0, 1.0], Relation::Le, 1.0);
        assert!(matches!(
            solve_lexicographic(&lp, &[1.0]),
            Err(LpError::Malformed(_))
        ));
    }

    #[test]
    fn malformed_dimension_rejected() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0, 2.0]);
        lp.push_constraint(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve(&lp), Err(LpError::Malformed(_))));
    }

    #[test]
    fn non_finite_entry_rejected() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![f64::NAN]);
        lp.push_constraint(vec![1.0], Relation::Le, 1.0);
        assert!(matches!(solve(&lp), Err(LpError::Malformed(_))));
        let mut lp = LinearProgram::new(Sense::Maximize, vec![1.0]);
        lp.push_constraint(vec![1.0], Relation::Le, f64::INFINITY);
        assert!(matches!(solve(&lp), Err(LpError::Malformed(_))));
    }

    #[test]
    fn optimal_solutions_satisfy_constraints() {
        let mut lp = LinearProgram::new(Sense::Maximize, vec![3.0, 1.0, 2.0]);
        lp.push_constraint(vec![1.0, 1.0, 3.0], Relation::Le, 30.0);
        lp.push_constraint(vec![2.0, 2.0, 5.0], Relation::Le, 24.0);
        lp.push_constraint(vec![4.0, 1.0, 2.0], Relation::Le, 36.0);
        let sol = solve(&lp).unwrap();
        assert_close(sol.objective_value().unwrap(), 28.0, 1e-7);
        assert!(lp.max_violation(sol.primal().unwrap()) <= 1e-7);
    }
}
