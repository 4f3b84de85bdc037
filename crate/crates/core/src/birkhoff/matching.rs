use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Hopcroft–Karp on the bipartite graph `row → adj[row]` with `m` rows and
/// `m` columns. Returns `match[row] = col` when a perfect matching exists.
/// Vertices are visited in index order, so the result is deterministic.
pub fn perfect_matching(adj: &[Vec<usize>], m: usize) -> Option<Vec<usize>> {
    let n = adj.len();
    let mut row_match = vec![FREE; n];
    let mut col_match = vec![FREE; m];
    let mut dist = vec![0usize; n];
    let mut size = 0;
    loop {
        let mut queue = VecDeque::new();
        let mut found = false;
        for r in 0..n {
            if row_match[r] == FREE {
                dist[r] = 0;
                queue.push_back(r);
            } else {
                dist[r] = usize::MAX;
            }
        }
        while let Some(r) = queue.pop_front() {
            for &c in &adj[r] {
                match col_match[c] {
                    FREE => found = true,
                    r2 if dist[r2] == usize::MAX => {
                        dist[r2] = dist[r] + 1;
                        queue.push_back(r2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        for r in 0..n {
            if row_match[r] == FREE && augment(r, adj, &mut row_match, &mut col_match, &mut dist) {
                size += 1;
            }
        }
    }
    (size == n && n == m).then_some(row_match)
}

fn augment(r: usize, adj: &[Vec<usize>], row_match: &mut [usize], col_match: &mut [usize], dist: &mut [usize]) -> bool {
    for &c in &adj[r] {
        let next = col_match[c];
        if next == FREE || dist[next] == dist[r] + 1 && augment(next, adj, row_match, col_match, dist) {
            row_match[r] = c;
            col_match[c] = r;
            return true;
        }
    }
    dist[r] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_perfect_matching() {
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        assert_eq!(perfect_matching(&adj, 3), Some(vec![1, 0, 2]));
    }

    #[test]
    fn reports_deficiency() {
        let adj = vec![vec![0], vec![0], vec![1, 2]];
        assert_eq!(perfect_matching(&adj, 3), None);
    }
}
