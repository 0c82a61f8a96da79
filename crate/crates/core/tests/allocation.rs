use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ineff::allocation::*;
use ineff::experiments::{estimate_with_error, measure_rsd, sweep_instance};
use ineff::frontier::frontier_summary;
use ineff::inefficiency::ihat;
use ineff::{Exact, Extended, Scalar};

fn q(n: i64, d: i64) -> Exact {
    Exact::from_ratio(n, d)
}

/// Random strict utilities with small denominators.
fn random_problem(n: usize, seed: u64) -> AllocationProblem<Exact> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let mut values: Vec<i64> = (0..n as i64).map(|v| v * 3 + 1).collect();
            values.shuffle(&mut rng);
            values.into_iter().map(|v| q(v, 3 * n as i64)).collect()
        })
        .collect();
    AllocationProblem::from_rows(rows).unwrap()
}

#[test]
fn passing_tests_have_efficient_witnesses() {
    for seed in 0..200 {
        let p = random_problem(2 + (seed % 5) as usize, seed);
        for i in 0..p.n() {
            for o in 0..p.n() {
                if test_min_pareto(&p, i, o) {
                    let w = test_witness(&p, i, o).expect("witness");
                    assert_eq!(w.object_of(i), o);
                    assert!(brute_force_is_pareto_efficient(&p, &w));
                }
            }
        }
    }
}

#[test]
fn rsd_outcomes_are_efficient() {
    for seed in 0..100 {
        let p = random_problem(2 + (seed % 5) as usize, seed);
        for (m, _) in rsd_exact(&p).unwrap().entries() {
            assert!(is_expost_pareto_efficient(&p, m), "seed {seed}: {m}");
        }
    }
}

#[test]
fn rsd_inefficiency_is_the_mean_over_orders() {
    for seed in 0..40 {
        let p = random_problem(2 + (seed % 4) as usize, seed);
        let n = p.n();
        let ranges = allocation_frontier_ranges(&p);
        let orders = all_matchings(n);
        let mut total = Extended::zero();
        for order in &orders {
            let m = serial_dictatorship(&p, order.assignment()).unwrap();
            total = total + allocation_inefficiency_with(&p, &ranges, &MatchingLottery::point(m));
        }
        let mean = total.scale(&q(1, orders.len() as i64));
        assert_eq!(
            allocation_inefficiency(&p, &rsd_exact(&p).unwrap()),
            mean,
            "seed {seed}"
        );
    }
}

#[test]
fn ranges_and_inefficiency_match_the_induced_context() {
    for seed in 0..60 {
        let n = 1 + (seed % 4) as usize;
        let p = random_problem(n, 1000 + seed);
        let c = induced_context(&p).unwrap();
        let summary = frontier_summary(&c).unwrap();
        let ranges = allocation_frontier_ranges(&p);
        assert_eq!(ranges.u_min, summary.u_min, "seed {seed}");
        assert_eq!(ranges.u_max, summary.u_max, "seed {seed}");

        let outcome = rsd_exact(&p).unwrap();
        let direct = allocation_inefficiency(&p, &outcome);
        let oracle = ihat(&c, &outcome.to_context_lottery().unwrap())
            .unwrap()
            .value;
        assert_eq!(direct, oracle, "seed {seed}");

        let (best, v_max) = max_value_matching(&p, &ranges);
        assert_eq!(
            matching_value(&p, &ranges, &best),
            Extended::Finite(v_max.clone())
        );
        let oracle_max = ihat(&c, &ineff::Lottery::point(c.n_alternatives(), 0))
            .unwrap()
            .v_max;
        assert_eq!(v_max, oracle_max);

        for (k, m) in all_matchings(n).iter().enumerate() {
            let point = MatchingLottery::point(m.clone());
            let oracle = ihat(&c, &ineff::Lottery::point(c.n_alternatives(), k))
                .unwrap()
                .value;
            assert_eq!(allocation_inefficiency_with(&p, &ranges, &point), oracle);
        }
    }
}

#[test]
fn monte_carlo_tracks_exact_values() {
    for n in 2..=6 {
        for k in 0..6 {
            let seed = 77 + k as u64;
            let p = sweep_instance(n, 0.05, k, seed).unwrap();
            let exact = measure_rsd(&p, 1, seed).unwrap();
            let trials = 4000;
            let sampled = rsd_sample_stream(&p, trials, seed, 3).unwrap();
            let (estimate, se) = estimate_with_error(&p, &sampled, trials);
            let gap = (estimate.to_f64() - exact.value.to_f64()).abs();
            assert!(gap <= 3.0 * se + 1e-9, "n={n} k={k}: gap {gap} se {se}");
        }
    }
}

#[test]
fn generators_feed_valid_problems() {
    for n in 2..=8 {
        let p: AllocationProblem<f64> = ur_eps_instance(n, &0.01, n as u64).unwrap();
        let r = allocation_frontier_ranges(&p);
        assert!(r.u_max.iter().all(|&u| u == 1.0));
        let p: AllocationProblem<f64> = random_instance(n, n as u64).unwrap();
        assert_eq!(p.n(), n);
    }
}

fn ranking_profile() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (1usize..=5).prop_flat_map(|n| {
        proptest::collection::vec(Just((0..n).collect::<Vec<_>>()).prop_shuffle(), n)
    })
}

fn from_rankings(rankings: &[Vec<usize>]) -> AllocationProblem<Exact> {
    let n = rankings.len();
    let rows = rankings
        .iter()
        .map(|order| {
            let mut row = vec![q(0, 1); n];
            for (pos, &o) in order.iter().enumerate() {
                row[o] = q((n - pos) as i64, 1);
            }
            row
        })
        .collect();
    AllocationProblem::from_rows(rows).unwrap()
}

proptest! {
    #[test]
    fn inefficiency_is_never_negative(rankings in ranking_profile(), pick in any::<prop::sample::Index>()) {
        let p = from_rankings(&rankings);
        let matchings = all_matchings(p.n());
        let m = matchings[pick.index(matchings.len())].clone();
        let value = allocation_inefficiency(&p, &MatchingLottery::point(m.clone()));
        prop_assert!(value >= Extended::zero());
        // Infinite exactly when someone with a single efficient object misses it.
        let r = allocation_frontier_ranges(&p);
        let missed = (0..p.n()).any(|i| r.indifferent(i) && m.object_of(i) != r.favorite[i]);
        prop_assert_eq!(value == Extended::PosInf, missed);
    }

    #[test]
    fn completion_is_efficient_and_weakly_better(rankings in ranking_profile(), pick in any::<prop::sample::Index>()) {
        let p = from_rankings(&rankings);
        let matchings = all_matchings(p.n());
        let m = &matchings[pick.index(matchings.len())];
        let done = pareto_completion(&p, m);
        prop_assert!(is_expost_pareto_efficient(&p, &done));
        for i in 0..p.n() {
            prop_assert!(p.rank(i, done.object_of(i)) <= p.rank(i, m.object_of(i)));
        }
    }

    #[test]
    fn matching_ranks_invert_enumeration(n in 1usize..=6, pick in any::<prop::sample::Index>()) {
        let matchings = all_matchings(n);
        let k = pick.index(matchings.len());
        prop_assert_eq!(matchings[k].lexicographic_rank(), k);
    }

    #[test]
    fn rsd_exact_probabilities_sum_to_one(rankings in ranking_profile()) {
        let p = from_rankings(&rankings);
        let l = rsd_exact(&p).unwrap();
        let total = l.entries().iter().fold(q(0, 1), |acc, (_, w)| acc + w.clone());
        prop_assert_eq!(total, q(1, 1));
    }
}
