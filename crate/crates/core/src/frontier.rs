//! Pareto efficiency against mixtures, frontier utility ranges, and the two
//! reference points (ideal point, point of minimal expectations).

use crate::context::{Context, Lottery};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpOutcome, Relation};
use crate::scalar::{Mode, Scalar};

/// Per-individual utility ranges over the Pareto frontier.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierSummary<S> {
    /// Pure alternatives lying on the frontier, ascending.
    pub efficient_pure: Vec<usize>,
    pub u_min: Vec<S>,
    pub u_max: Vec<S>,
    pub frontier_indifferent: Vec<bool>,
}

impl<S: Scalar> FrontierSummary<S> {
    /// Number of frontier-concerned individuals.
    pub fn dimension(&self) -> usize {
        self.frontier_indifferent.iter().filter(|&&f| !f).count()
    }

    /// `u_max(i) - u_min(i)`.
    pub fn diameter(&self, i: usize) -> S {
        self.u_max[i].clone() - self.u_min[i].clone()
    }

    pub fn n_individuals(&self) -> usize {
        self.u_max.len()
    }

    pub fn is_efficient_pure(&self, a: usize) -> bool {
        self.efficient_pure.binary_search(&a).is_ok()
    }
}

/// Solves `max sum_i d_i` s.t. `U lambda - d = u(x)`, `lambda` in the simplex,
/// `d >= 0`. Returns the optimum and the optimal `lambda`, which is a frontier
/// point weakly dominating `x`.
///
/// Only alternatives not dominated by another pure alternative enter the LP:
/// shifting mass from a dominated alternative to its dominator never lowers
/// anyone's utility, so the optimum is unchanged.
pub fn efficiency_gap<S: Scalar>(c: &Context<S>, x: &Lottery<S>) -> Result<(S, Lottery<S>)> {
    let target = c.utility_profile(x)?;
    let (m, n) = (c.n_alternatives(), c.n_individuals());
    let keep = undominated_alternatives(c);
    let k = keep.len();
    let mut objective = vec![S::zero(); k];
    objective.extend(std::iter::repeat_with(S::one).take(n));
    let mut lp = LinearProgram::maximize(objective);
    for (i, t) in target.into_iter().enumerate() {
        let mut coeffs: Vec<S> = keep.iter().map(|&a| c.utility(i, a).clone()).collect();
        coeffs.extend((0..n).map(|j| if j == i { -S::one() } else { S::zero() }));
        lp = lp.constraint(coeffs, Relation::Eq, t);
    }
    let mut simplex = vec![S::one(); k];
    simplex.extend(std::iter::repeat_with(S::zero).take(n));
    lp = lp.constraint(simplex, Relation::Eq, S::one());
    // A pure x is feasible with d = 0: basis {lambda_x, d_1..d_n}.
    if let Some(pos) = x.as_point().and_then(|a| keep.iter().position(|&b| b == a)) {
        lp = lp.basis_hint(std::iter::once(pos).chain(k..k + n).collect());
    }

    match solve_lp(&lp)? {
        LpOutcome::Optimal { value, solution } => {
            let lambda: Vec<S> = solution
                .into_iter()
                .take(k)
                .map(|v| S::max_of(v, S::zero()))
                .collect();
            let witness = match S::MODE {
                Mode::Exact => Lottery::new(lambda)?,
                Mode::Float => Lottery::normalized(lambda)?,
            };
            Ok((value, witness.lift(&keep, m)?))
        }
        // x itself is feasible and d is bounded by the row maxima.
        LpOutcome::Infeasible | LpOutcome::Unbounded => Err(Error::NumericalBreakdown),
    }
}

/// Alternatives whose utility column no other pure alternative dominates.
pub fn undominated_alternatives<S: Scalar>(c: &Context<S>) -> Vec<usize> {
    let columns: Vec<Vec<S>> = (0..c.n_alternatives()).map(|a| c.column(a)).collect();
    (0..columns.len())
        .filter(|&a| !columns.iter().any(|b| dominates(b, &columns[a])))
        .collect()
}

fn gap_is_zero<S: Scalar>(c: &Context<S>, gap: &S) -> bool {
    match S::MODE {
        Mode::Exact => gap.is_zero(),
        Mode::Float => {
            let scale = c
                .utilities()
                .iter()
                .flatten()
                .fold(0.0f64, |acc, u| acc.max(u.to_f64().abs()));
            gap.to_f64() < 1e-9 * (1.0 + scale)
        }
    }
}

/// True iff no lottery weakly improves everyone and strictly improves someone.
pub fn is_efficient<S: Scalar>(c: &Context<S>, x: &Lottery<S>) -> Result<bool> {
    let (gap, _) = efficiency_gap(c, x)?;
    Ok(gap_is_zero(c, &gap))
}

/// A frontier lottery that every individual weakly prefers to `x`.
pub fn dominating_frontier_point<S: Scalar>(c: &Context<S>, x: &Lottery<S>) -> Result<Lottery<S>> {
    efficiency_gap(c, x).map(|(_, w)| w)
}

/// Classifies every pure alternative and collects the frontier ranges.
///
/// `u_max(i)` is the global row maximum: some maximizer of `u_i` is itself
/// efficient (break ties by the other individuals), so the frontier attains it.
/// `u_min(i)` is the minimum over efficient *pure* alternatives: the efficient
/// set of a polytope is a union of faces, every vertex of an efficient face is
/// efficient, and the vertices of the utility polytope are images of pure
/// alternatives.
pub fn frontier_summary<S: Scalar>(c: &Context<S>) -> Result<FrontierSummary<S>> {
    let m = c.n_alternatives();
    let mut efficient_pure = Vec::new();
    // A pure alternative dominated by another is inefficient without an LP.
    for a in undominated_alternatives(c) {
        if is_efficient(c, &Lottery::point(m, a))? {
            efficient_pure.push(a);
        }
    }
    if efficient_pure.is_empty() {
        return Err(Error::NumericalBreakdown);
    }

    let u_max = ideal_point_profile(c);
    let u_min: Vec<S> = (0..c.n_individuals())
        .map(|i| {
            efficient_pure
                .iter()
                .map(|&a| c.utility(i, a).clone())
                .reduce(S::min_of)
                .expect("nonempty efficient set")
        })
        .collect();
    let frontier_indifferent: Vec<bool> = u_min
        .iter()
        .zip(&u_max)
        .map(|(lo, hi)| lo.approx_eq(hi))
        .collect();

    let summary = FrontierSummary {
        efficient_pure,
        u_min,
        u_max,
        frontier_indifferent,
    };
    debug_assert!(
        S::MODE == Mode::Float || summary.dimension() != 1,
        "frontier dimension 1 is impossible"
    );
    Ok(summary)
}

/// `a` is weakly above `b` everywhere and strictly above somewhere (exactly).
fn dominates<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a.iter().zip(b).any(|(x, y)| x > y)
}

/// Per-individual maximum over all pure alternatives.
pub fn ideal_point_profile<S: Scalar>(c: &Context<S>) -> Vec<S> {
    c.utilities()
        .iter()
        .map(|row| row.iter().cloned().reduce(S::max_of).expect("nonempty row"))
        .collect()
}

/// Per-individual minimum over the Pareto frontier.
pub fn minimal_expectations_profile<S: Scalar>(c: &Context<S>) -> Result<Vec<S>> {
    frontier_summary(c).map(|s| s.u_min)
}

/// Largest instance the vertex-enumeration oracle accepts.
pub const BRUTE_FORCE_MAX_ALTERNATIVES: usize = 8;
pub const BRUTE_FORCE_MAX_INDIVIDUALS: usize = 5;

/// Efficiency test by vertex enumeration, independent of the simplex code.
///
/// The dominating set `D = {lambda in simplex : U lambda >= u(x)}` is a
/// polytope. `x` is dominated iff some vertex of `D` differs from `u(x)` in
/// utility. A vertex has support of size at most `n + 1`, and on its support
/// `S` it is pinned by the simplex equation plus `|S| - 1` tight dominance
/// rows; all such square systems are solved exactly.
pub fn brute_force_is_efficient<S: Scalar>(c: &Context<S>, x: &Lottery<S>) -> Result<bool> {
    let (m, n) = (c.n_alternatives(), c.n_individuals());
    if m > BRUTE_FORCE_MAX_ALTERNATIVES {
        return Err(Error::GuardrailExceeded {
            what: format!("{m} alternatives"),
            limit: BRUTE_FORCE_MAX_ALTERNATIVES,
        });
    }
    if n > BRUTE_FORCE_MAX_INDIVIDUALS {
        return Err(Error::GuardrailExceeded {
            what: format!("{n} individuals"),
            limit: BRUTE_FORCE_MAX_INDIVIDUALS,
        });
    }
    let target = c.utility_profile(x)?;

    for support_mask in 1u32..(1 << m) {
        let support: Vec<usize> = (0..m).filter(|&a| support_mask >> a & 1 == 1).collect();
        let s = support.len();
        if s > n + 1 {
            continue;
        }
        for tight_mask in 0u32..(1 << n) {
            if tight_mask.count_ones() as usize != s - 1 {
                continue;
            }
            let tight: Vec<usize> = (0..n).filter(|&i| tight_mask >> i & 1 == 1).collect();

            let mut matrix = vec![vec![S::one(); s]];
            let mut rhs = vec![S::one()];
            for &i in &tight {
                matrix.push(support.iter().map(|&a| c.utility(i, a).clone()).collect());
                rhs.push(target[i].clone());
            }
            let Some(lambda) = solve_square(matrix, rhs) else {
                continue;
            };
            if lambda.iter().any(|v| v.is_negative()) {
                continue;
            }
            let mut strict = false;
            let mut feasible = true;
            for i in 0..n {
                let u = support.iter().zip(&lambda).fold(S::zero(), |acc, (&a, l)| {
                    acc + c.utility(i, a).clone() * l.clone()
                });
                let diff = u - target[i].clone();
                if diff.is_negative() {
                    feasible = false;
                    break;
                }
                strict |= diff.is_positive();
            }
            if feasible && strict {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Gaussian elimination; `None` when the system is singular.
fn solve_square<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let k = b.len();
    for col in 0..k {
        let pivot = (col..k)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&r, &s| {
                a[r][col]
                    .abs()
                    .partial_cmp(&a[s][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..k {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() / a[col][col].clone();
            for j in col..k {
                a[r][j] = a[r][j].clone() - f.clone() * a[col][j].clone();
            }
            b[r] = b[r].clone() - f * b[col].clone();
        }
    }
    Some((0..k).map(|r| b[r].clone() / a[r][r].clone()).collect())
}
