//! Seeded and parametric allocation instances.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::AllocationProblem;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Resolution of generated utilities: values are multiples of `1 / GRID`.
pub const GRID: i64 = 1_000_000;

/// The shared-ranking family: individual `i` (1-based) values object `j` at
/// `1 - (j-1) eps` for `j <= i` and `(n-j)/n * eps` beyond. Needs
/// `0 < eps < 1/n`.
pub fn lower_bound_instance<S: Scalar>(n: usize, eps: &S) -> Result<AllocationProblem<S>> {
    if n == 0 {
        return Err(Error::NoIndividuals);
    }
    let n_s = S::from_int(n as i64);
    if !(eps.clone() > S::zero() && eps.clone() * n_s.clone() < S::one()) {
        return Err(Error::InvalidEpsilon(format!(
            "need 0 < eps < 1/{n}, got {eps}"
        )));
    }
    let rows = (1..=n as i64)
        .map(|i| {
            (1..=n as i64)
                .map(|j| {
                    if j <= i {
                        S::one() - S::from_int(j - 1) * eps.clone()
                    } else {
                        S::from_ratio(n as i64 - j, n as i64) * eps.clone()
                    }
                })
                .collect()
        })
        .collect();
    let p = AllocationProblem::from_rows(rows)?;
    debug_assert!((0..n).all(|i| p.ranking(i).iter().copied().eq(0..n)));
    Ok(p)
}

/// `k` distinct grid offsets in `[0, GRID)`, the first of which is 0.
fn offsets<R: Rng>(rng: &mut R, k: usize) -> Vec<i64> {
    let mut out = vec![0];
    out.extend(
        sample(rng, GRID as usize - 1, k - 1)
            .into_iter()
            .map(|r| r as i64 + 1),
    );
    out
}

/// Unit-range utilities confined near the ends: each individual has a
/// nonempty proper set of high objects in `(1-eps, 1]` (one exactly 1) and
/// low objects in `[0, eps)` (one exactly 0). Needs `0 < eps < 1/2`, `n >= 2`.
pub fn ur_eps_instance<S: Scalar>(n: usize, eps: &S, seed: u64) -> Result<AllocationProblem<S>> {
    if n < 2 {
        return Err(Error::PreconditionViolated(format!("need n >= 2, got {n}")));
    }
    if !(eps.clone() > S::zero() && eps.clone() * S::from_int(2) < S::one()) {
        return Err(Error::InvalidEpsilon(format!(
            "need 0 < eps < 1/2, got {eps}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let high: Vec<bool> = loop {
                let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
                let k = mask.iter().filter(|&&h| h).count();
                if k > 0 && k < n {
                    break mask;
                }
            };
            let k = high.iter().filter(|&&h| h).count();
            let mut hi = offsets(&mut rng, k).into_iter();
            let mut lo = offsets(&mut rng, n - k).into_iter();
            high.iter()
                .map(|&h| {
                    if h {
                        S::one() - eps.clone() * S::from_ratio(hi.next().expect("k offsets"), GRID)
                    } else {
                        eps.clone() * S::from_ratio(lo.next().expect("n-k offsets"), GRID)
                    }
                })
                .collect()
        })
        .collect();
    AllocationProblem::from_rows(rows)
}

/// Distinct utilities on the grid in `[0, 1]`, uniform without replacement.
pub fn random_instance<S: Scalar>(n: usize, seed: u64) -> Result<AllocationProblem<S>> {
    if n == 0 {
        return Err(Error::NoIndividuals);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            sample(&mut rng, GRID as usize + 1, n)
                .into_iter()
                .map(|r| S::from_ratio(r as i64, GRID))
                .collect()
        })
        .collect();
    AllocationProblem::from_rows(rows)
}
