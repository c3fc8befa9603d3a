//! Hopcroft-Karp maximum bipartite matching.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// Right partner of each left node.
    pub left: Vec<Option<usize>>,
    /// Left partner of each right node.
    pub right: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left.iter().flatten().count()
    }
}

/// Maximum matching of the bipartite graph whose left node `i` is adjacent
/// to `adj[i]` on the right. Deterministic for a fixed adjacency order.
pub fn max_bipartite_matching(adj: &[Vec<usize>], right_count: usize) -> Matching {
    let left_count = adj.len();
    let mut pair_left = vec![FREE; left_count];
    let mut pair_right = vec![FREE; right_count];
    let mut dist = vec![0usize; left_count];
    loop {
        let mut queue = VecDeque::new();
        for i in 0..left_count {
            if pair_left[i] == FREE {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &r in &adj[i] {
                let j = pair_right[r];
                if j == FREE {
                    found = true;
                } else if dist[j] == usize::MAX {
                    dist[j] = dist[i] + 1;
                    queue.push_back(j);
                }
            }
        }
        if !found {
            break;
        }
        for i in 0..left_count {
            if pair_left[i] == FREE {
                augment(i, adj, &mut pair_left, &mut pair_right, &mut dist);
            }
        }
    }
    let wrap = |v: Vec<usize>| v.into_iter().map(|x| (x != FREE).then_some(x)).collect();
    Matching { left: wrap(pair_left), right: wrap(pair_right) }
}

fn augment(
    i: usize,
    adj: &[Vec<usize>],
    pair_left: &mut [usize],
    pair_right: &mut [usize],
    dist: &mut [usize],
) -> bool {
    for &r in &adj[i] {
        let j = pair_right[r];
        if j == FREE || (dist[j] == dist[i] + 1 && augment(j, adj, pair_left, pair_right, dist)) {
            pair_left[i] = r;
            pair_right[r] = i;
            return true;
        }
    }
    dist[i] = usize::MAX;
    false
}
