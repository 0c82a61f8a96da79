//! Maximum-weight perfect assignment (Hungarian method with potentials).
//!
//! Forbidden edges are `None` and are never relaxed, so no big-M penalty is
//! involved; an instance whose allowed edges admit no perfect matching
//! yields `None`.

use crate::scalar::Scalar;

/// Row `i` is assigned column `result.0[i]`; `result.1` is the total weight.
///
/// # Panics
/// If `weights` is not square.
pub fn max_weight_assignment<S: Scalar>(weights: &[Vec<Option<S>>]) -> Option<(Vec<usize>, S)> {
    let n = weights.len();
    assert!(weights.iter().all(|r| r.len() == n), "square weight matrix");
    let cost = |i: usize, j: usize| weights[i - 1][j - 1].clone().map(|w| -w);

    // 1-based; column 0 and row 0 are sentinels.
    let mut u = vec![S::zero(); n + 1];
    let mut v = vec![S::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<S>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta: Option<S> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                if let Some(c) = cost(i0, j) {
                    let reduced = c - u[i0].clone() - v[j].clone();
                    if minv[j].as_ref().map_or(true, |m| reduced < *m) {
                        minv[j] = Some(reduced);
                        way[j] = j0;
                    }
                }
                if let Some(m) = &minv[j] {
                    if delta.as_ref().map_or(true, |d| m < d) {
                        delta = Some(m.clone());
                        j1 = j;
                    }
                }
            }
            let delta = delta?;
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] = u[owner[j]].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(m) = minv[j].as_mut() {
                    *m = m.clone() - delta.clone();
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    let mut total = S::zero();
    for (i, &j) in assignment.iter().enumerate() {
        total = total + weights[i][j].clone()?;
    }
    Some((assignment, total))
}
