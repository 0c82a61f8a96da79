//! One-sided object allocation: `n` individuals, `n` objects, strict
//! preferences, no money.
//!
//! Alternatives are perfect matchings. Preferences over matchings are induced
//! by each individual's utility for the object they receive, so the
//! inefficiency of a random matching only needs per-individual frontier
//! ranges (favorite object and [`pareto::find_min_pareto_match`]) and a
//! maximum-weight assignment. Deciding whether a given individual–object pair
//! appears in some Pareto efficient matching is NP-complete; no solver for
//! that question is provided.

pub mod bipartite;
pub mod generators;
pub mod hungarian;
pub mod pareto;
pub mod rsd;
pub mod welfare;

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::context::{Context, Lottery};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use bipartite::hopcroft_karp;
pub use generators::{lower_bound_instance, random_instance, ur_eps_instance};
pub use hungarian::max_weight_assignment;
pub use pareto::{
    allocation_frontier_ranges, brute_force_efficient_matchings, brute_force_is_pareto_efficient,
    brute_force_min_pareto_object, find_min_pareto_match, is_expost_pareto_efficient,
    pareto_completion, test_min_pareto, test_witness, AllocationRanges,
};
pub use rsd::{rsd_exact, rsd_sample, rsd_sample_stream, serial_dictatorship, RSD_EXACT_LIMIT};
pub use welfare::{
    allocation_inefficiency, allocation_inefficiency_with, matching_value, max_value_matching,
};

/// Largest `n` for which the `n!`-alternative induced context is built.
pub const INDUCED_CONTEXT_LIMIT: usize = 7;

/// Individuals (rows) with strict utilities over objects (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationProblem<S> {
    object_names: Vec<String>,
    utilities: Vec<Vec<S>>,
    /// `rankings[i]` lists objects from most to least preferred.
    rankings: Vec<Vec<usize>>,
    /// `rank_of[i][o]` is the position of `o` in `rankings[i]`.
    rank_of: Vec<Vec<usize>>,
}

impl<S: Scalar> AllocationProblem<S> {
    pub fn new(object_names: Vec<String>, utilities: Vec<Vec<S>>) -> Result<Self> {
        let n = object_names.len();
        if n == 0 {
            return Err(Error::EmptyAlternatives);
        }
        let mut seen = HashSet::new();
        for name in &object_names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        if utilities.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} individuals for {n} objects",
                utilities.len()
            )));
        }
        let mut rankings = Vec::with_capacity(n);
        let mut rank_of = Vec::with_capacity(n);
        for (i, row) in utilities.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedMatrix {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| row[b].partial_cmp(&row[a]).expect("comparable utilities"));
            for w in order.windows(2) {
                if row[w[0]].approx_eq(&row[w[1]]) {
                    let (first, second) = (w[0].min(w[1]), w[0].max(w[1]));
                    return Err(Error::TiedPreferences {
                        individual: i,
                        first,
                        second,
                    });
                }
            }
            let mut ranks = vec![0; n];
            for (pos, &o) in order.iter().enumerate() {
                ranks[o] = pos;
            }
            rankings.push(order);
            rank_of.push(ranks);
        }
        Ok(Self {
            object_names,
            utilities,
            rankings,
            rank_of,
        })
    }

    /// Objects named `a, b, c, ...` (then `o26, o27, ...`).
    pub fn from_rows(utilities: Vec<Vec<S>>) -> Result<Self> {
        let n = utilities.len();
        Self::new(default_object_names(n), utilities)
    }

    pub fn n(&self) -> usize {
        self.utilities.len()
    }

    pub fn object_names(&self) -> &[String] {
        &self.object_names
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_names.iter().position(|o| o == name)
    }

    pub fn utilities(&self) -> &[Vec<S>] {
        &self.utilities
    }

    pub fn utility(&self, i: usize, o: usize) -> &S {
        &self.utilities[i][o]
    }

    /// Objects from most to least preferred by `i`.
    pub fn ranking(&self, i: usize) -> &[usize] {
        &self.rankings[i]
    }

    /// Position of `o` in `i`'s ranking (0 = favorite).
    pub fn rank(&self, i: usize, o: usize) -> usize {
        self.rank_of[i][o]
    }

    /// `i` strictly prefers `a` to `b`.
    pub fn prefers(&self, i: usize, a: usize, b: usize) -> bool {
        self.rank_of[i][a] < self.rank_of[i][b]
    }

    pub fn favorite(&self, i: usize) -> usize {
        self.rankings[i][0]
    }

    /// Same rankings, utilities mapped into another scalar type.
    pub fn map_scalars<T: Scalar>(&self, f: impl Fn(&S) -> T) -> AllocationProblem<T> {
        AllocationProblem {
            object_names: self.object_names.clone(),
            utilities: self
                .utilities
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
            rankings: self.rankings.clone(),
            rank_of: self.rank_of.clone(),
        }
    }
}

pub(crate) fn default_object_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|o| {
            if o < 26 {
                char::from(b'a' + o as u8).to_string()
            } else {
                format!("o{o}")
            }
        })
        .collect()
}

/// A perfect matching: individual `i` receives object `assignment[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching {
    assignment: Vec<usize>,
}

impl Matching {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        crate::context::check_permutation(&assignment, assignment.len())?;
        Ok(Self { assignment })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            assignment: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn object_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Position among all matchings in lexicographic order of assignments.
    pub fn lexicographic_rank(&self) -> usize {
        let n = self.n();
        let mut rank = 0;
        let mut factorial = (1..n).product::<usize>();
        let mut remaining: Vec<usize> = (0..n).collect();
        for (k, &o) in self.assignment.iter().enumerate() {
            let pos = remaining.iter().position(|&r| r == o).expect("permutation");
            rank += pos * factorial;
            remaining.remove(pos);
            if k + 1 < n {
                factorial /= n - k - 1;
            }
        }
        rank
    }

    /// `a|b|c`: the object names received by individuals `0, 1, 2, ...`.
    pub fn display_with(&self, names: &[String]) -> String {
        self.assignment
            .iter()
            .map(|&o| names[o].as_str())
            .collect::<Vec<_>>()
            .join("|")
    }
}

/// Every permutation of `0..n` in lexicographic order.
pub fn all_matchings(n: usize) -> Vec<Matching> {
    let mut current: Vec<usize> = (0..n).collect();
    let mut out = vec![Matching {
        assignment: current.clone(),
    }];
    while next_permutation(&mut current) {
        out.push(Matching {
            assignment: current.clone(),
        });
    }
    out
}

/// Advances to the next permutation in lexicographic order; false after the
/// last one.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v
        .iter()
        .rposition(|&x| x > v[i])
        .expect("pivot has a successor");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// A probability distribution over matchings; entries are distinct and
/// sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingLottery<S> {
    entries: Vec<(Matching, S)>,
}

impl<S: Scalar> MatchingLottery<S> {
    /// Merges duplicates and validates total mass.
    pub fn new(entries: Vec<(Matching, S)>) -> Result<Self> {
        let mut merged: BTreeMap<Matching, S> = BTreeMap::new();
        for (m, p) in entries {
            if p.is_negative() {
                return Err(Error::InvalidLottery("negative probability".into()));
            }
            let slot = merged.entry(m).or_insert_with(S::zero);
            *slot = slot.clone() + p;
        }
        let n = merged.keys().next().map(Matching::n);
        if merged.keys().any(|m| Some(m.n()) != n) {
            return Err(Error::InvalidLottery("matchings of different sizes".into()));
        }
        let total = merged.values().cloned().fold(S::zero(), |a, b| a + b);
        if !total.approx_eq(&S::one()) || merged.is_empty() {
            return Err(Error::InvalidLottery(format!(
                "probabilities sum to {total}"
            )));
        }
        Ok(Self {
            entries: merged.into_iter().collect(),
        })
    }

    pub fn point(m: Matching) -> Self {
        Self {
            entries: vec![(m, S::one())],
        }
    }

    /// Empirical distribution of `counts` out of `total` draws.
    pub fn from_counts(counts: BTreeMap<Matching, u64>, total: u64) -> Result<Self> {
        let entries = counts
            .into_iter()
            .map(|(m, c)| (m, S::from_ratio(c as i64, total as i64)))
            .collect();
        Self::new(entries)
    }

    pub fn entries(&self) -> &[(Matching, S)] {
        &self.entries
    }

    pub fn probability(&self, m: &Matching) -> S {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(m))
            .map_or_else(|_| S::zero(), |idx| self.entries[idx].1.clone())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The same distribution as a lottery over [`induced_context`].
    pub fn to_context_lottery(&self) -> Result<Lottery<S>> {
        let n = self.entries[0].0.n();
        let size: usize = (1..=n).product();
        let mut weights = vec![S::zero(); size];
        for (m, p) in &self.entries {
            weights[m.lexicographic_rank()] = p.clone();
        }
        Lottery::normalized(weights)
    }
}

/// The context whose alternatives are all `n!` matchings (lexicographic
/// order) and where each individual values a matching by their object.
pub fn induced_context<S: Scalar>(p: &AllocationProblem<S>) -> Result<Context<S>> {
    let n = p.n();
    if n > INDUCED_CONTEXT_LIMIT {
        return Err(Error::GuardrailExceeded {
            what: format!("induced context of {n}! matchings"),
            limit: INDUCED_CONTEXT_LIMIT,
        });
    }
    let matchings = all_matchings(n);
    let names = matchings
        .iter()
        .map(|m| m.display_with(p.object_names()))
        .collect();
    let utilities = (0..n)
        .map(|i| {
            matchings
                .iter()
                .map(|m| p.utility(i, m.object_of(i)).clone())
                .collect()
        })
        .collect();
    Context::new(names, utilities)
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.assignment.iter().map(|o| o.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn rankings_are_derived() {
        let p = AllocationProblem::from_rows(vec![
            vec![q(1, 1), q(0, 1), q(1, 2)],
            vec![q(0, 1), q(1, 2), q(1, 1)],
            vec![q(1, 3), q(1, 1), q(0, 1)],
        ])
        .unwrap();
        assert_eq!(p.ranking(0), &[0, 2, 1]);
        assert_eq!(p.ranking(1), &[2, 1, 0]);
        assert_eq!(p.rank(2, 1), 0);
        assert!(p.prefers(0, 2, 1));
        assert_eq!(p.object_names(), &["a", "b", "c"]);
    }

    #[test]
    fn ties_and_shapes_are_rejected() {
        let tied =
            AllocationProblem::from_rows(vec![vec![q(1, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        assert_eq!(
            tied,
            Err(Error::TiedPreferences {
                individual: 0,
                first: 0,
                second: 1
            })
        );
        let ragged = AllocationProblem::from_rows(vec![vec![q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        assert!(ragged.is_err());
        let dup = AllocationProblem::new(
            vec!["a".into(), "a".into()],
            vec![vec![q(1, 1), q(0, 1)]; 2],
        );
        assert!(matches!(dup, Err(Error::DuplicateName(_))));
    }

    #[test]
    fn matchings_in_lexicographic_order() {
        let all = all_matchings(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].assignment(), &[0, 1, 2]);
        assert_eq!(all[5].assignment(), &[2, 1, 0]);
        for (k, m) in all.iter().enumerate() {
            assert_eq!(m.lexicographic_rank(), k);
        }
        assert!(Matching::new(vec![0, 0]).is_err());
    }

    #[test]
    fn induced_context_shapes() {
        let two = AllocationProblem::from_rows(vec![vec![q(1, 1), q(0, 1)]; 2]).unwrap();
        let c = induced_context(&two).unwrap();
        assert_eq!(c.n_alternatives(), 2);
        assert_eq!(c.names(), &["a|b", "b|a"]);
        assert_eq!(c.row(1), &[q(0, 1), q(1, 1)]);

        let three = AllocationProblem::from_rows(vec![
            vec![q(3, 1), q(2, 1), q(1, 1)],
            vec![q(1, 1), q(3, 1), q(2, 1)],
            vec![q(2, 1), q(1, 1), q(3, 1)],
        ])
        .unwrap();
        let c = induced_context(&three).unwrap();
        assert_eq!(c.n_alternatives(), 6);
        for (k, m) in all_matchings(3).iter().enumerate() {
            for i in 0..3 {
                assert_eq!(c.utility(i, k), three.utility(i, m.object_of(i)));
            }
        }

        let eight = AllocationProblem::from_rows(
            (0..8).map(|_| (0..8).map(|o| q(o, 1)).collect()).collect(),
        )
        .unwrap();
        assert!(matches!(
            induced_context(&eight),
            Err(Error::GuardrailExceeded { .. })
        ));
    }

    #[test]
    fn lottery_merges_duplicates() {
        let id = Matching::identity(2);
        let swap = Matching::new(vec![1, 0]).unwrap();
        let l = MatchingLottery::new(vec![
            (swap.clone(), q(1, 4)),
            (id.clone(), q(1, 2)),
            (swap.clone(), q(1, 4)),
        ])
        .unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.entries()[0].0, id);
        assert_eq!(l.probability(&swap), q(1, 2));
        let lottery = l.to_context_lottery().unwrap();
        assert_eq!(lottery.weights(), &[q(1, 2), q(1, 2)]);
        assert!(MatchingLottery::new(vec![(id, q(1, 3))]).is_err());
    }
}
