//! Dense two-phase tableau simplex with Bland's anti-cycling rule.
//!
//! Exact mode pivots on rationals and terminates by Bland's rule; float mode
//! runs the same pivots with a `1e-9` pivot tolerance and verifies the final
//! point by substitution. Problems here are tiny, so no sparse machinery.

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint<S> {
    pub coeffs: Vec<S>,
    pub relation: Relation,
    pub rhs: S,
}

/// `maximize objective · x` subject to the constraints, with `x_j >= 0`
/// unless `free[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram<S> {
    pub objective: Vec<S>,
    pub constraints: Vec<Constraint<S>>,
    pub free: Vec<bool>,
    /// Structural columns believed to form a feasible basis; used to skip
    /// phase 1 when they do.
    pub basis_hint: Vec<usize>,
}

impl<S: Scalar> LinearProgram<S> {
    pub fn maximize(objective: Vec<S>) -> Self {
        let n = objective.len();
        Self {
            objective,
            constraints: Vec::new(),
            free: vec![false; n],
            basis_hint: Vec::new(),
        }
    }

    pub fn constraint(mut self, coeffs: Vec<S>, relation: Relation, rhs: S) -> Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn free_variable(mut self, j: usize) -> Self {
        self.free[j] = true;
        self
    }

    pub fn basis_hint(mut self, columns: Vec<usize>) -> Self {
        self.basis_hint = columns;
        self
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<S> {
    Optimal { value: S, solution: Vec<S> },
    Infeasible,
    Unbounded,
}

impl<S> LpOutcome<S> {
    pub fn value(&self) -> Option<&S> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn solution(&self) -> Option<&[S]> {
        match self {
            LpOutcome::Optimal { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

const FLOAT_ITERATION_CAP: usize = 100_000;

/// Solves `lp` in the mode of `S`.
pub fn solve_lp<S: Scalar>(lp: &LinearProgram<S>) -> Result<LpOutcome<S>> {
    let n = lp.n_vars();
    if n == 0 {
        return Err(Error::DimensionMismatch("no variables".into()));
    }
    if lp.free.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} free flags for {n} variables",
            lp.free.len()
        )));
    }
    for (r, c) in lp.constraints.iter().enumerate() {
        if c.coeffs.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "constraint {r} has {} coefficients, expected {n}",
                c.coeffs.len()
            )));
        }
    }

    let outcome = Tableau::build(lp).run()?;
    if let LpOutcome::Optimal { solution, .. } = &outcome {
        verify(lp, solution)?;
    }
    Ok(outcome)
}

/// Substitutes `x` back into `lp`; any violation is a numerical breakdown.
fn verify<S: Scalar>(lp: &LinearProgram<S>, x: &[S]) -> Result<()> {
    // Zero in exact mode, 1e-9 absolute residual in float mode.
    let slack = S::tolerance();
    for (j, v) in x.iter().enumerate() {
        if !lp.free[j] && *v < -slack.clone() {
            return Err(Error::NumericalBreakdown);
        }
    }
    for c in &lp.constraints {
        let lhs = c
            .coeffs
            .iter()
            .zip(x)
            .fold(S::zero(), |acc, (a, v)| acc + a.clone() * v.clone());
        let diff = lhs - c.rhs.clone();
        let ok = match c.relation {
            Relation::Le => diff <= slack,
            Relation::Ge => diff >= -slack.clone(),
            Relation::Eq => diff.abs() <= slack,
        };
        if !ok {
            return Err(Error::NumericalBreakdown);
        }
    }
    Ok(())
}

struct Tableau<'a, S> {
    lp: &'a LinearProgram<S>,
    /// Column of `x_j^-` for each free variable.
    neg_col: Vec<Option<usize>>,
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    n_cols: usize,
    first_artificial: usize,
}

impl<'a, S: Scalar> Tableau<'a, S> {
    fn build(lp: &'a LinearProgram<S>) -> Self {
        let n = lp.n_vars();
        let mut neg_col = vec![None; n];
        let mut n_struct = n;
        for (j, &free) in lp.free.iter().enumerate() {
            if free {
                neg_col[j] = Some(n_struct);
                n_struct += 1;
            }
        }

        // Normalize to nonnegative right-hand sides.
        let normalized: Vec<(Vec<S>, Relation, S)> = lp
            .constraints
            .iter()
            .map(|c| {
                let mut coeffs: Vec<S> = c.coeffs.clone();
                for (j, col) in neg_col.iter().enumerate() {
                    if col.is_some() {
                        coeffs.push(-c.coeffs[j].clone());
                    }
                }
                if c.rhs < S::zero() {
                    let relation = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (
                        coeffs.into_iter().map(|v| -v).collect(),
                        relation,
                        -c.rhs.clone(),
                    )
                } else {
                    (coeffs, c.relation, c.rhs.clone())
                }
            })
            .collect();

        let n_slack = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Eq)
            .count();
        let n_art = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Le)
            .count();
        let first_artificial = n_struct + n_slack;
        let n_cols = first_artificial + n_art;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut rhs = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut next_slack, mut next_art) = (n_struct, first_artificial);
        for (coeffs, relation, b) in normalized {
            let mut row = coeffs;
            row.resize(n_cols, S::zero());
            match relation {
                Relation::Le => {
                    row[next_slack] = S::one();
                    basis.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -S::one();
                    next_slack += 1;
                    row[next_art] = S::one();
                    basis.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = S::one();
                    basis.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }

        Self {
            lp,
            neg_col,
            rows,
            rhs,
            basis,
            n_cols,
            first_artificial,
        }
    }

    /// Pivots hinted columns into artificial rows; undone unless the result
    /// is still primal feasible.
    fn crash(&mut self) {
        let saved = (self.rows.clone(), self.rhs.clone(), self.basis.clone());
        for &j in &self.lp.basis_hint {
            if j >= self.lp.n_vars() || self.lp.free[j] || self.basis.contains(&j) {
                continue;
            }
            let row = (0..self.rows.len())
                .find(|&r| self.basis[r] >= self.first_artificial && !self.rows[r][j].is_zero());
            if let Some(r) = row {
                self.pivot(r, j);
            }
        }
        if self.rhs.iter().any(|b| b.is_negative()) {
            (self.rows, self.rhs, self.basis) = saved;
        }
    }

    fn run(mut self) -> Result<LpOutcome<S>> {
        if !self.lp.basis_hint.is_empty() {
            self.crash();
        }
        // Phase 1: maximize -(sum of artificials).
        if self.first_artificial < self.n_cols {
            let cost: Vec<S> = (0..self.n_cols)
                .map(|j| {
                    if j >= self.first_artificial {
                        -S::one()
                    } else {
                        S::zero()
                    }
                })
                .collect();
            match self.optimize(&cost, self.n_cols)? {
                Phase::Optimal(value) => {
                    if value.is_negative() {
                        return Ok(LpOutcome::Infeasible);
                    }
                }
                Phase::Unbounded => unreachable!("phase 1 objective is bounded by 0"),
            }
            self.drive_out_artificials();
        }

        // Phase 2 on the structural objective.
        let mut cost = vec![S::zero(); self.n_cols];
        for (j, c) in self.lp.objective.iter().enumerate() {
            cost[j] = c.clone();
            if let Some(neg) = self.neg_col[j] {
                cost[neg] = -c.clone();
            }
        }
        match self.optimize(&cost, self.first_artificial)? {
            Phase::Unbounded => Ok(LpOutcome::Unbounded),
            Phase::Optimal(_) => {
                let solution = self.primal();
                let value = self
                    .lp
                    .objective
                    .iter()
                    .zip(&solution)
                    .fold(S::zero(), |acc, (c, v)| acc + c.clone() * v.clone());
                Ok(LpOutcome::Optimal { value, solution })
            }
        }
    }

    /// Primal simplex with Bland's rule over columns `< allowed`.
    fn optimize(&mut self, cost: &[S], allowed: usize) -> Result<Phase<S>> {
        let mut reduced: Vec<S> = cost.to_vec();
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero() && S::MODE == Mode::Exact {
                continue;
            }
            for (j, v) in self.rows[r].iter().enumerate() {
                reduced[j] = reduced[j].clone() - cb.clone() * v.clone();
            }
        }

        let mut iterations = 0usize;
        loop {
            iterations += 1;
            if S::MODE == Mode::Float && iterations > FLOAT_ITERATION_CAP {
                return Err(Error::NumericalBreakdown);
            }
            let Some(enter) = (0..allowed).find(|&j| reduced[j].is_positive()) else {
                let value = self
                    .basis
                    .iter()
                    .zip(&self.rhs)
                    .fold(S::zero(), |acc, (&b, v)| acc + cost[b].clone() * v.clone());
                return Ok(Phase::Optimal(value));
            };

            let mut leave: Option<(usize, S)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[r].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((best, best_ratio)) => {
                        if ratio.approx_eq(best_ratio) {
                            self.basis[r] < self.basis[*best]
                        } else {
                            ratio < *best_ratio
                        }
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((pivot_row, _)) = leave else {
                return Ok(Phase::Unbounded);
            };
            self.pivot(pivot_row, enter);

            let factor = reduced[enter].clone();
            for (j, v) in self.rows[pivot_row].iter().enumerate() {
                if *v != S::zero() {
                    reduced[j] = reduced[j].clone() - factor.clone() * v.clone();
                }
            }
            reduced[enter] = S::zero();
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            if *v != S::zero() {
                *v = v.clone() / p.clone();
            }
        }
        self.rhs[row] = self.rhs[row].clone() / p;
        self.rows[row][col] = S::one();

        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.rows.len() {
            if r == row {
                continue;
            }
            let f = self.rows[r][col].clone();
            if f == S::zero() {
                continue;
            }
            for (j, pv) in pivot_row.iter().enumerate() {
                if *pv != S::zero() {
                    self.rows[r][j] = self.rows[r][j].clone() - f.clone() * pv.clone();
                }
            }
            self.rows[r][col] = S::zero();
            self.rhs[r] = self.rhs[r].clone() - f * pivot_rhs.clone();
        }
        self.basis[row] = col;
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are redundant and dropped.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] < self.first_artificial {
                r += 1;
                continue;
            }
            let replacement = (0..self.first_artificial).find(|&j| !self.rows[r][j].is_zero());
            match replacement {
                Some(j) => {
                    self.pivot(r, j);
                    r += 1;
                }
                None => {
                    self.rows.remove(r);
                    self.rhs.remove(r);
                    self.basis.remove(r);
                }
            }
        }
    }

    fn primal(&self) -> Vec<S> {
        let mut cols = vec![S::zero(); self.n_cols];
        for (r, &b) in self.basis.iter().enumerate() {
            cols[b] = self.rhs[r].clone();
        }
        (0..self.lp.n_vars())
            .map(|j| match self.neg_col[j] {
                Some(neg) => cols[j].clone() - cols[neg].clone(),
                None => cols[j].clone(),
            })
            .collect()
    }
}

enum Phase<S> {
    Optimal(S),
    Unbounded,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn bounded_single_variable() {
        let lp =
            LinearProgram::maximize(vec![q(1, 1)]).constraint(vec![q(1, 1)], Relation::Le, q(1, 1));
        assert_eq!(
            solve_lp(&lp).unwrap(),
            LpOutcome::Optimal {
                value: q(1, 1),
                solution: vec![q(1, 1)]
            }
        );
    }

    #[test]
    fn infeasible_single_variable() {
        let lp = LinearProgram::maximize(vec![q(1, 1)]).constraint(
            vec![q(1, 1)],
            Relation::Le,
            q(-1, 1),
        );
        assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Infeasible);
        let lp = LinearProgram::maximize(vec![1.0f64]).constraint(vec![1.0], Relation::Le, -1.0);
        assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_single_variable() {
        let lp = LinearProgram::maximize(vec![q(1, 1)]);
        assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Unbounded);
        let lp =
            LinearProgram::maximize(vec![q(1, 1)]).constraint(vec![q(1, 1)], Relation::Ge, q(0, 1));
        assert_eq!(solve_lp(&lp).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn textbook_problem_with_equalities_and_free_variable() {
        // max 3x + 2y - z  s.t. x + y + z = 4, x - y >= -2, x <= 3, z free, z >= -1
        let lp = LinearProgram::maximize(vec![q(3, 1), q(2, 1), q(-1, 1)])
            .constraint(vec![q(1, 1), q(1, 1), q(1, 1)], Relation::Eq, q(4, 1))
            .constraint(vec![q(1, 1), q(-1, 1), q(0, 1)], Relation::Ge, q(-2, 1))
            .constraint(vec![q(1, 1), q(0, 1), q(0, 1)], Relation::Le, q(3, 1))
            .constraint(vec![q(0, 1), q(0, 1), q(1, 1)], Relation::Ge, q(-1, 1))
            .free_variable(2);
        // x = 3, z = -1, y = 2 -> 9 + 4 + 1 = 14
        let out = solve_lp(&lp).unwrap();
        assert_eq!(out.value(), Some(&q(14, 1)));
        assert_eq!(out.solution().unwrap(), &[q(3, 1), q(2, 1), q(-1, 1)]);
    }

    #[test]
    fn basis_hints_do_not_change_the_optimum() {
        // max x + 2y  s.t. x + y = 1, x - y - s = 0 with s >= 0.
        let lp = LinearProgram::maximize(vec![q(1, 1), q(2, 1), q(0, 1)])
            .constraint(vec![q(1, 1), q(1, 1), q(0, 1)], Relation::Eq, q(1, 1))
            .constraint(vec![q(1, 1), q(-1, 1), q(-1, 1)], Relation::Eq, q(0, 1));
        let cold = solve_lp(&lp).unwrap();
        assert_eq!(cold.value(), Some(&q(3, 2)));
        for hint in [vec![0, 2], vec![1, 2], vec![0, 1], vec![7]] {
            assert_eq!(solve_lp(&lp.clone().basis_hint(hint)).unwrap(), cold);
        }
    }

    #[test]
    fn redundant_equalities() {
        let lp = LinearProgram::maximize(vec![q(1, 1), q(1, 1)])
            .constraint(vec![q(1, 1), q(1, 1)], Relation::Eq, q(1, 1))
            .constraint(vec![q(2, 1), q(2, 1)], Relation::Eq, q(2, 1));
        assert_eq!(solve_lp(&lp).unwrap().value(), Some(&q(1, 1)));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule.
        let lp = LinearProgram::maximize(vec![q(3, 4), q(-150, 1), q(1, 50), q(-6, 1)])
            .constraint(
                vec![q(1, 4), q(-60, 1), q(-1, 25), q(9, 1)],
                Relation::Le,
                q(0, 1),
            )
            .constraint(
                vec![q(1, 2), q(-90, 1), q(-1, 50), q(3, 1)],
                Relation::Le,
                q(0, 1),
            )
            .constraint(
                vec![q(0, 1), q(0, 1), q(1, 1), q(0, 1)],
                Relation::Le,
                q(1, 1),
            );
        assert_eq!(solve_lp(&lp).unwrap().value(), Some(&q(1, 20)));
    }

    #[test]
    fn dimension_mismatch() {
        let lp = LinearProgram::maximize(vec![q(1, 1)]).constraint(
            vec![q(1, 1), q(1, 1)],
            Relation::Le,
            q(1, 1),
        );
        assert!(matches!(solve_lp(&lp), Err(Error::DimensionMismatch(_))));
        let lp = LinearProgram::<Exact>::maximize(vec![]);
        assert!(matches!(solve_lp(&lp), Err(Error::DimensionMismatch(_))));
    }
}
