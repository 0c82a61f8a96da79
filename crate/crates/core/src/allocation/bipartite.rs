//! Maximum-cardinality bipartite matching.

use std::collections::VecDeque;

const UNREACHED: usize = usize::MAX;

/// Maximum-cardinality matching of the bipartite graph on `0..n_left` and
/// `0..n_right` with the given `(left, right)` edges, as sorted pairs.
///
/// # Panics
/// If an edge endpoint is out of range.
pub fn hopcroft_karp(
    n_left: usize,
    n_right: usize,
    edges: &[(usize, usize)],
) -> Vec<(usize, usize)> {
    let mut adj = vec![Vec::new(); n_left];
    for &(u, v) in edges {
        assert!(u < n_left && v < n_right, "edge ({u}, {v}) out of range");
        adj[u].push(v);
    }
    max_matching(&adj, n_right)
        .into_iter()
        .enumerate()
        .filter_map(|(u, v)| v.map(|v| (u, v)))
        .collect()
}

/// Hopcroft–Karp on adjacency lists; returns the partner of each left vertex.
pub fn max_matching(adj: &[Vec<usize>], n_right: usize) -> Vec<Option<usize>> {
    let n_left = adj.len();
    let mut pair_left: Vec<Option<usize>> = vec![None; n_left];
    let mut pair_right: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![UNREACHED; n_left];
    while bfs(adj, &pair_left, &pair_right, &mut dist) {
        for u in 0..n_left {
            if pair_left[u].is_none() {
                dfs(u, adj, &mut pair_left, &mut pair_right, &mut dist);
            }
        }
    }
    pair_left
}

/// Layers free left vertices; true if some augmenting path exists.
fn bfs(
    adj: &[Vec<usize>],
    pair_left: &[Option<usize>],
    pair_right: &[Option<usize>],
    dist: &mut [usize],
) -> bool {
    let mut queue = VecDeque::new();
    for (u, p) in pair_left.iter().enumerate() {
        if p.is_none() {
            dist[u] = 0;
            queue.push_back(u);
        } else {
            dist[u] = UNREACHED;
        }
    }
    let mut found = false;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            match pair_right[v] {
                None => found = true,
                Some(w) if dist[w] == UNREACHED => {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
                Some(_) => {}
            }
        }
    }
    found
}

fn dfs(
    u: usize,
    adj: &[Vec<usize>],
    pair_left: &mut [Option<usize>],
    pair_right: &mut [Option<usize>],
    dist: &mut [usize],
) -> bool {
    for &v in &adj[u] {
        let advance = match pair_right[v] {
            None => true,
            Some(w) => dist[w] == dist[u] + 1 && dfs(w, adj, pair_left, pair_right, dist),
        };
        if advance {
            pair_left[u] = Some(v);
            pair_right[v] = Some(u);
            return true;
        }
    }
    dist[u] = UNREACHED;
    false
}

/// Size of a maximum matching.
pub fn max_matching_size(adj: &[Vec<usize>], n_right: usize) -> usize {
    max_matching(adj, n_right).iter().flatten().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_size(adj: &[Vec<usize>], n_right: usize) -> usize {
        fn go(u: usize, adj: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
            if u == adj.len() {
                return 0;
            }
            let mut best = go(u + 1, adj, used);
            for &v in &adj[u] {
                if !used[v] {
                    used[v] = true;
                    best = best.max(1 + go(u + 1, adj, used));
                    used[v] = false;
                }
            }
            best
        }
        go(0, adj, &mut vec![false; n_right])
    }

    #[test]
    fn perfect_matching_needs_augmentation() {
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let m = max_matching(&adj, 3);
        assert_eq!(m, vec![Some(1), Some(0), Some(2)]);
    }

    #[test]
    fn edge_list_examples() {
        let complete: Vec<_> = (0..3).flat_map(|u| (0..3).map(move |v| (u, v))).collect();
        assert_eq!(hopcroft_karp(3, 3, &complete).len(), 3);
        assert!(hopcroft_karp(2, 2, &[]).is_empty());
        assert_eq!(hopcroft_karp(2, 1, &[(0, 0), (1, 0)]).len(), 1);
    }

    #[test]
    fn hall_violation() {
        let adj = vec![vec![0], vec![0], vec![0, 1, 2]];
        assert_eq!(max_matching_size(&adj, 3), 2);
        assert_eq!(max_matching_size(&[vec![], vec![]], 2), 0);
    }

    #[test]
    fn agrees_with_exhaustive_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=6);
            let adj: Vec<Vec<usize>> = (0..n)
                .map(|_| (0..n).filter(|_| rng.gen_bool(0.35)).collect())
                .collect();
            let m = max_matching(&adj, n);
            let mut used = vec![false; n];
            for (u, v) in m.iter().enumerate() {
                if let Some(v) = *v {
                    assert!(adj[u].contains(&v));
                    assert!(!std::mem::replace(&mut used[v], true));
                }
            }
            assert_eq!(m.iter().flatten().count(), brute_force_size(&adj, n));
        }
    }
}
