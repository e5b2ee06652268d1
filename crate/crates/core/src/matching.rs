//! Hopcroft–Karp maximum bipartite matching.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Size of a maximum matching. `adj[u]` lists the right vertices adjacent
/// to left vertex `u`; right vertices are `0..n_right`.
pub fn maximum_matching(adj: &[Vec<usize>], n_right: usize) -> usize {
    let n_left = adj.len();
    let mut match_left = vec![FREE; n_left];
    let mut match_right = vec![FREE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut size = 0;

    loop {
        // BFS layering from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_left[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_right[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }
        for u in 0..n_left {
            if match_left[u] == FREE && augment(u, adj, &mut match_left, &mut match_right, &mut dist) {
                size += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &v in &adj[u] {
        let w = match_right[v];
        let next = w == FREE || (dist[w] == dist[u] + 1 && augment(w, adj, match_left, match_right, dist));
        if next {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(adj: &[Vec<usize>], n_right: usize) -> usize {
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
    fn small_graphs() {
        assert_eq!(maximum_matching(&[], 0), 0);
        assert_eq!(maximum_matching(&[vec![0], vec![0]], 1), 1);
        assert_eq!(maximum_matching(&[vec![0, 1], vec![0]], 2), 2);
    }

    #[test]
    fn agrees_with_brute_force_on_all_3x3_graphs() {
        for mask in 0u32..512 {
            let adj: Vec<Vec<usize>> = (0..3)
                .map(|u| (0..3).filter(|v| mask >> (3 * u + v) & 1 == 1).collect())
                .collect();
            assert_eq!(maximum_matching(&adj, 3), brute(&adj, 3), "mask {mask}");
        }
    }
}
