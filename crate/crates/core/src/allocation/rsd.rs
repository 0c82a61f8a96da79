//! Serial dictatorship and its uniformly randomized version.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{next_permutation, AllocationProblem, Matching, MatchingLottery};
use crate::context::check_permutation;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest `n` for which all `n!` orders are enumerated.
pub const RSD_EXACT_LIMIT: usize = 8;

/// Individuals pick in `order`, each taking their favorite remaining object.
pub fn serial_dictatorship<S: Scalar>(
    p: &AllocationProblem<S>,
    order: &[usize],
) -> Result<Matching> {
    check_permutation(order, p.n())?;
    Ok(greedy(p, order))
}

fn greedy<S: Scalar>(p: &AllocationProblem<S>, order: &[usize]) -> Matching {
    let mut taken = vec![false; p.n()];
    let mut assignment = vec![0; p.n()];
    for &i in order {
        let o = *p
            .ranking(i)
            .iter()
            .find(|&&o| !taken[o])
            .expect("as many objects as individuals");
        taken[o] = true;
        assignment[i] = o;
    }
    Matching { assignment }
}

/// The exact outcome distribution over all `n!` orders.
pub fn rsd_exact<S: Scalar>(p: &AllocationProblem<S>) -> Result<MatchingLottery<S>> {
    let n = p.n();
    if n > RSD_EXACT_LIMIT {
        return Err(Error::GuardrailExceeded {
            what: format!("exact random serial dictatorship over {n}! orders"),
            limit: RSD_EXACT_LIMIT,
        });
    }
    let mut counts: BTreeMap<Matching, u64> = BTreeMap::new();
    let mut order: Vec<usize> = (0..n).collect();
    let mut total = 0;
    loop {
        *counts.entry(greedy(p, &order)).or_insert(0) += 1;
        total += 1;
        if !next_permutation(&mut order) {
            break;
        }
    }
    MatchingLottery::from_counts(counts, total)
}

/// Empirical distribution over `trials` uniformly shuffled orders.
pub fn rsd_sample<S: Scalar>(
    p: &AllocationProblem<S>,
    trials: u64,
    seed: u64,
) -> Result<MatchingLottery<S>> {
    rsd_sample_stream(p, trials, seed, 0)
}

/// As [`rsd_sample`], drawing from stream `stream` of the seeded generator so
/// that independent tasks sharing a seed do not overlap.
pub fn rsd_sample_stream<S: Scalar>(
    p: &AllocationProblem<S>,
    trials: u64,
    seed: u64,
    stream: u64,
) -> Result<MatchingLottery<S>> {
    if trials == 0 {
        return Err(Error::PreconditionViolated("at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut counts: BTreeMap<Matching, u64> = BTreeMap::new();
    let mut order: Vec<usize> = (0..p.n()).collect();
    for _ in 0..trials {
        order.shuffle(&mut rng);
        *counts.entry(greedy(p, &order)).or_insert(0) += 1;
    }
    MatchingLottery::from_counts(counts, trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocation::is_expost_pareto_efficient;
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
    fn dictatorship_examples() {
        let one = AllocationProblem::from_rows(vec![vec![q(1, 1)]]).unwrap();
        assert_eq!(
            serial_dictatorship(&one, &[0]).unwrap(),
            Matching::identity(1)
        );
        assert_eq!(
            serial_dictatorship(&identical(), &[0, 1]).unwrap(),
            Matching::identity(2)
        );
        assert_eq!(
            serial_dictatorship(&identical(), &[1, 0]).unwrap(),
            Matching::new(vec![1, 0]).unwrap()
        );
        for order in [[0, 1], [1, 0]] {
            assert_eq!(
                serial_dictatorship(&opposed(), &order).unwrap(),
                Matching::identity(2)
            );
        }
        assert!(matches!(
            serial_dictatorship(&opposed(), &[0, 0]),
            Err(Error::NotAPermutation(_))
        ));
    }

    #[test]
    fn exact_examples() {
        let l = rsd_exact(&identical()).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.entries().iter().all(|(_, p)| *p == q(1, 2)));
        let l = rsd_exact(&opposed()).unwrap();
        assert_eq!(l.entries(), &[(Matching::identity(2), q(1, 1))]);
        let one = AllocationProblem::from_rows(vec![vec![q(1, 1)]]).unwrap();
        assert_eq!(rsd_exact(&one).unwrap().len(), 1);
        let nine = AllocationProblem::from_rows(
            (0..9).map(|_| (0..9).map(|o| q(o, 1)).collect()).collect(),
        )
        .unwrap();
        assert!(matches!(
            rsd_exact(&nine),
            Err(Error::GuardrailExceeded { .. })
        ));
    }

    #[test]
    fn exact_outcomes_are_efficient() {
        let p = AllocationProblem::from_rows(vec![
            vec![q(3, 1), q(2, 1), q(1, 1), q(0, 1)],
            vec![q(3, 1), q(1, 1), q(2, 1), q(0, 1)],
            vec![q(0, 1), q(3, 1), q(2, 1), q(1, 1)],
            vec![q(3, 1), q(2, 1), q(0, 1), q(1, 1)],
        ])
        .unwrap();
        let l = rsd_exact(&p).unwrap();
        assert!(l
            .entries()
            .iter()
            .all(|(m, _)| is_expost_pareto_efficient(&p, m)));
    }

    #[test]
    fn sampling_is_deterministic_and_concentrates() {
        let p = identical().map_scalars(|v| v.to_f64());
        let a = rsd_sample(&p, 1000, 3).unwrap();
        assert_eq!(a, rsd_sample(&p, 1000, 3).unwrap());
        let big = rsd_sample(&p, 100_000, 3).unwrap();
        assert!(big.entries().iter().all(|(_, w)| (w - 0.5).abs() < 0.02));
        let one = AllocationProblem::from_rows(vec![vec![1.0]]).unwrap();
        assert_eq!(rsd_sample(&one, 17, 0).unwrap().len(), 1);
        assert!(rsd_sample(&one, 0, 0).is_err());
        assert_ne!(
            rsd_sample_stream(&p, 50, 3, 1).unwrap(),
            rsd_sample_stream(&p, 50, 3, 2).unwrap()
        );
    }
}
