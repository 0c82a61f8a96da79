//! Named contexts and seeded random generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::context::{Context, Lottery};
use crate::error::{Error, Result};
use crate::scalar::{Exact, Scalar};

fn q(n: i64, d: i64) -> Exact {
    Exact::from_ratio(n, d)
}

/// Three individuals over `x, y, z`: the first two rank `x > y > z`, the
/// third `y > x > z`, and `z` is terrible for everyone.
pub fn arrow_context() -> Context<Exact> {
    Context::new(
        vec!["x".into(), "y".into(), "z".into()],
        vec![
            vec![q(1, 1), q(9, 10), q(0, 1)],
            vec![q(1, 1), q(9, 10), q(0, 1)],
            vec![q(1, 2), q(1, 1), q(0, 1)],
        ],
    )
    .expect("valid fixture")
}

/// Alternatives `{0} ∪ g`; individual `i` (1-based) gets utility 1 at
/// alternative `i` and 0 elsewhere.
pub fn make_chat(n: usize, g: &[usize]) -> Result<Context<Exact>> {
    if n == 0 {
        return Err(Error::InvalidFixture("no individuals".into()));
    }
    let mut members = g.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.len() != g.len() {
        return Err(Error::InvalidFixture("repeated member".into()));
    }
    if members.len() == 1 {
        return Err(Error::InvalidFixture(
            "a single-member group is excluded".into(),
        ));
    }
    if let Some(&bad) = members.iter().find(|&&i| i == 0 || i > n) {
        return Err(Error::InvalidFixture(format!(
            "member {bad} outside 1..={n}"
        )));
    }
    let alternatives: Vec<usize> = std::iter::once(0).chain(members).collect();
    let utilities = (1..=n)
        .map(|i| {
            alternatives
                .iter()
                .map(|&a| if a == i { q(1, 1) } else { q(0, 1) })
                .collect()
        })
        .collect();
    Context::new(
        alternatives.iter().map(|a| a.to_string()).collect(),
        utilities,
    )
}

/// Two individuals with opposed favorites over the two matchings of two
/// objects: `m1` gives both their favorite, `m2` gives both the other object.
pub fn opposed_allocation_context() -> Context<Exact> {
    Context::new(
        vec!["m1".into(), "m2".into()],
        vec![vec![q(1, 1), q(0, 1)], vec![q(1, 1), q(0, 1)]],
    )
    .expect("valid fixture")
}

/// Three individuals; the third is indifferent over the frontier `{p, q}`,
/// and `r`, `s` both leave the third below it while `r` strictly dominates `s`.
pub fn partially_indifferent_context() -> Context<Exact> {
    Context::new(
        vec!["p".into(), "q".into(), "r".into(), "s".into()],
        vec![
            vec![q(1, 1), q(0, 1), q(2, 5), q(1, 5)],
            vec![q(0, 1), q(1, 1), q(2, 5), q(1, 5)],
            vec![q(1, 1), q(1, 1), q(1, 2), q(1, 5)],
        ],
    )
    .expect("valid fixture")
}

/// Every individual indifferent between all alternatives.
pub fn constant_rows_context() -> Context<Exact> {
    Context::from_rows(vec![vec![q(2, 1); 3], vec![q(-1, 1); 3]]).expect("valid fixture")
}

/// `n x m` utilities in `[0, 1]`, deterministic in `seed`. Entries are
/// rationals with denominators at most 1000.
pub fn random_context<S: Scalar>(n: usize, m: usize, seed: u64) -> Context<S> {
    assert!(n >= 1 && m >= 1, "random context needs n, m >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let utilities = (0..n)
        .map(|_| {
            (0..m)
                .map(|_| {
                    let den = rng.gen_range(1..=1000i64);
                    S::from_ratio(rng.gen_range(0..=den), den)
                })
                .collect()
        })
        .collect();
    Context::from_rows(utilities).expect("rectangular by construction")
}

/// A lottery over `m` alternatives with small integer weights, so exact
/// arithmetic on it stays cheap.
pub fn random_lottery<S: Scalar, R: Rng>(m: usize, rng: &mut R) -> Lottery<S> {
    loop {
        let raw: Vec<i64> = (0..m).map(|_| rng.gen_range(0..=4)).collect();
        let total: i64 = raw.iter().sum();
        if total > 0 {
            let weights = raw.into_iter().map(|w| S::from_ratio(w, total)).collect();
            if let Ok(l) = Lottery::new(weights) {
                return l;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chat_shapes() {
        let c = make_chat(2, &[1, 2]).unwrap();
        assert_eq!(c.names(), &["0", "1", "2"]);
        assert_eq!(c.row(0), &[q(0, 1), q(1, 1), q(0, 1)]);
        assert_eq!(c.row(1), &[q(0, 1), q(0, 1), q(1, 1)]);

        let empty = make_chat(3, &[]).unwrap();
        assert_eq!(empty.n_alternatives(), 1);
        assert_eq!(empty.n_individuals(), 3);
        assert!(empty.utilities().iter().flatten().all(|u| *u == q(0, 1)));

        assert!(matches!(make_chat(3, &[2]), Err(Error::InvalidFixture(_))));
        assert!(matches!(
            make_chat(2, &[1, 3]),
            Err(Error::InvalidFixture(_))
        ));
    }

    #[test]
    fn random_contexts_are_deterministic() {
        let a: Context<Exact> = random_context(2, 3, 1);
        let b: Context<Exact> = random_context(2, 3, 1);
        assert_eq!(a, b);
        let tiny: Context<Exact> = random_context(1, 1, 99);
        assert_eq!((tiny.n_individuals(), tiny.n_alternatives()), (1, 1));
        let c: Context<Exact> = random_context(3, 4, 2);
        assert_eq!((c.n_individuals(), c.n_alternatives()), (3, 4));
        assert!(c
            .utilities()
            .iter()
            .flatten()
            .all(|u| *u >= q(0, 1) && *u <= q(1, 1)));
    }

    #[test]
    fn random_float_context_matches_exact() {
        let e: Context<Exact> = random_context(2, 3, 5);
        let f: Context<f64> = random_context(2, 3, 5);
        for (re, rf) in e.utilities().iter().zip(f.utilities()) {
            for (a, b) in re.iter().zip(rf) {
                assert!((a.to_f64() - b).abs() < 1e-15);
            }
        }
    }
}
