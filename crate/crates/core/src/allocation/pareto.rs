//! Ex-post Pareto efficiency of matchings and each individual's worst object
//! over efficient matchings.

use super::bipartite::max_matching_size;
use super::{all_matchings, AllocationProblem, Matching};
use crate::scalar::Scalar;

/// Per-individual utility range over ex-post Pareto efficient matchings.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationRanges<S> {
    pub favorite: Vec<usize>,
    /// Least preferred object among those received in efficient matchings.
    pub min_object: Vec<usize>,
    pub u_min: Vec<S>,
    pub u_max: Vec<S>,
}

impl<S: Scalar> AllocationRanges<S> {
    /// Same object at both ends of the range.
    pub fn indifferent(&self, i: usize) -> bool {
        self.favorite[i] == self.min_object[i]
    }

    pub fn n(&self) -> usize {
        self.favorite.len()
    }
}

/// Can everyone other than `i_hat` be matched to an object they strictly
/// prefers to `o`?
pub fn test_min_pareto<S: Scalar>(p: &AllocationProblem<S>, i_hat: usize, o: usize) -> bool {
    let (adj, _) = others_graph(p, i_hat, o);
    max_matching_size(&adj, p.n()) == p.n() - 1
}

/// Adjacency of the individuals other than `i_hat` (in index order) to the
/// objects they strictly prefer to `o`.
fn others_graph<S: Scalar>(
    p: &AllocationProblem<S>,
    i_hat: usize,
    o: usize,
) -> (Vec<Vec<usize>>, Vec<usize>) {
    let others: Vec<usize> = (0..p.n()).filter(|&i| i != i_hat).collect();
    let adj = others
        .iter()
        .map(|&i| p.ranking(i)[..p.rank(i, o)].to_vec())
        .collect();
    (adj, others)
}

/// The least preferred object `i_hat` receives in any ex-post Pareto
/// efficient matching. Polynomial: at most `n` bipartite matchings.
pub fn find_min_pareto_match<S: Scalar>(p: &AllocationProblem<S>, i_hat: usize) -> usize {
    p.ranking(i_hat)
        .iter()
        .rev()
        .copied()
        .find(|&o| test_min_pareto(p, i_hat, o))
        .expect("some object is received in an efficient matching")
}

/// When [`test_min_pareto`] passes, an ex-post Pareto efficient matching in
/// which `i_hat` receives exactly `o`.
///
/// Nobody else prefers `o` to their own object, and trading cycles only
/// improve objects, so `i_hat` never joins a cycle.
pub fn test_witness<S: Scalar>(
    p: &AllocationProblem<S>,
    i_hat: usize,
    o: usize,
) -> Option<Matching> {
    let (adj, others) = others_graph(p, i_hat, o);
    let partners = super::bipartite::max_matching(&adj, p.n());
    let mut assignment = vec![o; p.n()];
    for (k, partner) in partners.into_iter().enumerate() {
        assignment[others[k]] = partner?;
    }
    let m = pareto_completion(p, &Matching::new(assignment).ok()?);
    debug_assert_eq!(m.object_of(i_hat), o);
    Some(m)
}

/// `envy[i]` lists the `k != i` whose object `i` strictly prefers to their own.
fn envy_graph<S: Scalar>(p: &AllocationProblem<S>, m: &Matching) -> Vec<Vec<usize>> {
    (0..p.n())
        .map(|i| {
            (0..p.n())
                .filter(|&k| k != i && p.prefers(i, m.object_of(k), m.object_of(i)))
                .collect()
        })
        .collect()
}

/// Some directed cycle of `graph`, as a vertex list.
fn find_cycle(graph: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = graph.len();
    let mut mark = vec![Mark::New; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Open;
        while let Some((u, next)) = stack.last_mut() {
            let u = *u;
            if let Some(&v) = graph[u].get(*next) {
                *next += 1;
                match mark[v] {
                    Mark::New => {
                        mark[v] = Mark::Open;
                        parent[v] = u;
                        stack.push((v, 0));
                    }
                    Mark::Open => {
                        let mut cycle = vec![u];
                        let mut w = u;
                        while w != v {
                            w = parent[w];
                            cycle.push(w);
                        }
                        cycle.reverse();
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[u] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

/// True iff no matching makes someone strictly better off and nobody worse.
/// Equivalent to an acyclic envy digraph under strict preferences.
pub fn is_expost_pareto_efficient<S: Scalar>(p: &AllocationProblem<S>, m: &Matching) -> bool {
    find_cycle(&envy_graph(p, m)).is_none()
}

/// Executes trading cycles until none remain. The result weakly improves
/// everyone over `m` and is ex-post Pareto efficient.
pub fn pareto_completion<S: Scalar>(p: &AllocationProblem<S>, m: &Matching) -> Matching {
    let mut assignment = m.assignment().to_vec();
    loop {
        let current = Matching {
            assignment: assignment.clone(),
        };
        let Some(cycle) = find_cycle(&envy_graph(p, &current)) else {
            return current;
        };
        // Along the cycle each member takes their successor's object.
        let objects: Vec<usize> = cycle.iter().map(|&i| assignment[i]).collect();
        for (k, &i) in cycle.iter().enumerate() {
            assignment[i] = objects[(k + 1) % cycle.len()];
        }
    }
}

/// `a` weakly improves everyone over `b` and strictly improves someone.
fn dominates<S: Scalar>(p: &AllocationProblem<S>, a: &Matching, b: &Matching) -> bool {
    let mut strict = false;
    for i in 0..p.n() {
        let (ua, ub) = (p.utility(i, a.object_of(i)), p.utility(i, b.object_of(i)));
        if ua < ub {
            return false;
        }
        strict |= ua > ub;
    }
    strict
}

/// Every ex-post Pareto efficient matching by direct domination checks over
/// all `n!` matchings, in lexicographic order.
///
/// Candidates are scanned by total rank, best first: a dominator always has a
/// strictly smaller total, and by transitivity it suffices to compare with
/// the efficient matchings found so far.
pub fn brute_force_efficient_matchings<S: Scalar>(p: &AllocationProblem<S>) -> Vec<Matching> {
    let mut all = all_matchings(p.n());
    let total_rank = |m: &Matching| (0..p.n()).map(|i| p.rank(i, m.object_of(i))).sum::<usize>();
    all.sort_by_cached_key(total_rank);
    let mut efficient: Vec<Matching> = Vec::new();
    for m in all {
        if !efficient.iter().any(|e| dominates(p, e, &m)) {
            efficient.push(m);
        }
    }
    efficient.sort();
    efficient
}

/// Oracle for [`is_expost_pareto_efficient`]: no matching dominates `m`.
pub fn brute_force_is_pareto_efficient<S: Scalar>(p: &AllocationProblem<S>, m: &Matching) -> bool {
    !all_matchings(p.n())
        .iter()
        .any(|other| dominates(p, other, m))
}

/// Oracle for [`find_min_pareto_match`] given the efficient matchings.
pub fn brute_force_min_pareto_object<S: Scalar>(
    p: &AllocationProblem<S>,
    efficient: &[Matching],
    i: usize,
) -> usize {
    efficient
        .iter()
        .map(|m| m.object_of(i))
        .max_by_key(|&o| p.rank(i, o))
        .expect("an efficient matching exists")
}

/// Favorite and worst efficient object of every individual, with utilities.
pub fn allocation_frontier_ranges<S: Scalar>(p: &AllocationProblem<S>) -> AllocationRanges<S> {
    let favorite: Vec<usize> = (0..p.n()).map(|i| p.favorite(i)).collect();
    let min_object: Vec<usize> = (0..p.n()).map(|i| find_min_pareto_match(p, i)).collect();
    AllocationRanges {
        u_min: (0..p.n())
            .map(|i| p.utility(i, min_object[i]).clone())
            .collect(),
        u_max: (0..p.n())
            .map(|i| p.utility(i, favorite[i]).clone())
            .collect(),
        favorite,
        min_object,
    }
}
