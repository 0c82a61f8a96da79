//! The social value of matchings and the inefficiency of random matchings,
//! computed from frontier ranges without building the `n!`-alternative
//! context.

use super::hungarian::max_weight_assignment;
use super::pareto::{allocation_frontier_ranges, AllocationRanges};
use super::{AllocationProblem, Matching, MatchingLottery};
use crate::inefficiency::normalize_in_range;
use crate::scalar::{Extended, Scalar};

fn normalized<S: Scalar>(
    p: &AllocationProblem<S>,
    r: &AllocationRanges<S>,
    i: usize,
    o: usize,
) -> Extended<S> {
    normalize_in_range(
        p.utility(i, o).clone(),
        &r.u_min[i],
        &r.u_max[i],
        r.indifferent(i),
    )
}

/// `V` of a pure matching.
pub fn matching_value<S: Scalar>(
    p: &AllocationProblem<S>,
    r: &AllocationRanges<S>,
    m: &Matching,
) -> Extended<S> {
    let total = (0..p.n()).fold(Extended::zero(), |acc, i| {
        acc + normalized(p, r, i, m.object_of(i))
    });
    total.scale(&S::from_ratio(1, p.n() as i64))
}

/// A matching maximizing `V` and that maximum.
///
/// Individuals with a degenerate range may only receive their favorite
/// object; any other object would make `V` infinitely negative.
pub fn max_value_matching<S: Scalar>(
    p: &AllocationProblem<S>,
    r: &AllocationRanges<S>,
) -> (Matching, S) {
    let weights: Vec<Vec<Option<S>>> = (0..p.n())
        .map(|i| {
            (0..p.n())
                .map(|o| {
                    normalized(p, r, i, o)
                        .finite()
                        .cloned()
                        .filter(|_| !r.indifferent(i) || o == r.favorite[i])
                })
                .collect()
        })
        .collect();
    let (assignment, total) = max_weight_assignment(&weights)
        .expect("an efficient matching gives everyone a finite value");
    (Matching { assignment }, total / S::from_int(p.n() as i64))
}

/// `v_max - E[V]` for a random matching; `+inf` when some individual with a
/// degenerate range can miss their favorite object.
pub fn allocation_inefficiency<S: Scalar>(
    p: &AllocationProblem<S>,
    outcome: &MatchingLottery<S>,
) -> Extended<S> {
    let ranges = allocation_frontier_ranges(p);
    allocation_inefficiency_with(p, &ranges, outcome)
}

pub fn allocation_inefficiency_with<S: Scalar>(
    p: &AllocationProblem<S>,
    r: &AllocationRanges<S>,
    outcome: &MatchingLottery<S>,
) -> Extended<S> {
    let (_, v_max) = max_value_matching(p, r);
    let expected = outcome
        .entries()
        .iter()
        .fold(Extended::zero(), |acc, (m, prob)| {
            acc + matching_value(p, r, m).scale(prob)
        });
    match expected {
        Extended::Finite(v) => {
            let gap = v_max - v;
            Extended::Finite(if gap.is_zero() { S::zero() } else { gap })
        }
        Extended::NegInf => Extended::PosInf,
        Extended::PosInf => unreachable!("normalized utilities are bounded above by 1"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::rsd_exact;
    use crate::scalar::Exact;

    fn q(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn identical() -> AllocationProblem<Exact> {
        AllocationProblem::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(1, 1), q(9, 10)]]).unwrap()
    }

    fn opposed() -> AllocationProblem<Exact> {
        AllocationProblem::from_rows(vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)]]).unwrap()
    }

    #[test]
    fn max_value_examples() {
        let p = identical();
        let r = allocation_frontier_ranges(&p);
        assert_eq!(max_value_matching(&p, &r).1, q(1, 2));
        for m in crate::allocation::all_matchings(2) {
            assert_eq!(matching_value(&p, &r, &m), Extended::Finite(q(1, 2)));
        }

        let p = opposed();
        let r = allocation_frontier_ranges(&p);
        assert_eq!(max_value_matching(&p, &r), (Matching::identity(2), q(0, 1)));

        let one = AllocationProblem::from_rows(vec![vec![q(5, 1)]]).unwrap();
        let r = allocation_frontier_ranges(&one);
        assert_eq!(max_value_matching(&one, &r).1, q(0, 1));
    }

    #[test]
    fn inefficiency_examples() {
        let p = identical();
        assert_eq!(
            allocation_inefficiency(&p, &rsd_exact(&p).unwrap()),
            Extended::Finite(q(0, 1))
        );

        let p = opposed();
        let swap = MatchingLottery::point(Matching::new(vec![1, 0]).unwrap());
        assert_eq!(allocation_inefficiency(&p, &swap), Extended::PosInf);

        let one = AllocationProblem::from_rows(vec![vec![q(5, 1)]]).unwrap();
        let l = MatchingLottery::point(Matching::identity(1));
        assert_eq!(allocation_inefficiency(&one, &l), Extended::Finite(q(0, 1)));
    }
}
