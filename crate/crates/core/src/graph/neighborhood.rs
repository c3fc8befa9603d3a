//! Distance balls, induced subgraphs and power graphs.

use std::collections::VecDeque;

use super::{EdgeId, MultiGraph, Vertex};
use crate::error::{Error, Result};

pub const UNREACHED: usize = usize::MAX;

/// Hop distance from the nearest source, exploring at most `max_depth` hops.
/// Vertices farther away stay at [`UNREACHED`].
pub fn bfs_distances(g: &MultiGraph, sources: &[Vertex], max_depth: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHED; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] == UNREACHED {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        if dist[x] == max_depth {
            continue;
        }
        for &e in g.incident(x) {
            let y = g.other(e, x);
            if dist[y] == UNREACHED {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

/// An induced subgraph with maps back to the parent's vertex and edge ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: MultiGraph,
    pub vertex_map: Vec<Vertex>,
    pub edge_map: Vec<EdgeId>,
}

impl Subgraph {
    /// Subgraph induced by the vertices with `keep[v]`, in increasing order.
    pub fn induced(g: &MultiGraph, keep: &[bool]) -> Self {
        let mut local = vec![UNREACHED; g.vertex_count()];
        let vertex_map: Vec<Vertex> = g.vertices().filter(|&v| keep[v]).collect();
        for (i, &v) in vertex_map.iter().enumerate() {
            local[v] = i;
        }
        let mut graph = MultiGraph::new(vertex_map.len());
        let mut edge_map = Vec::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if keep[u] && keep[v] {
                graph.add_edge(local[u], local[v]).expect("induced edge is valid");
                edge_map.push(e);
            }
        }
        Self { graph, vertex_map, edge_map }
    }
}

/// The subgraph induced by all vertices within distance `r` of `centers`.
pub fn neighborhood(g: &MultiGraph, centers: &[Vertex], r: usize) -> Result<Subgraph> {
    if centers.is_empty() {
        return Err(Error::EmptyCenter);
    }
    if let Some(&bad) = centers.iter().find(|&&v| v >= g.vertex_count()) {
        return Err(Error::VertexOutOfRange { vertex: bad, n: g.vertex_count() });
    }
    let dist = bfs_distances(g, centers, r);
    let keep: Vec<bool> = dist.iter().map(|&d| d != UNREACHED).collect();
    Ok(Subgraph::induced(g, &keep))
}

/// Simple graph joining every pair at distance between 1 and `r`.
pub fn power_graph(g: &MultiGraph, r: usize) -> MultiGraph {
    let mut p = MultiGraph::new(g.vertex_count());
    for u in g.vertices() {
        let dist = bfs_distances(g, &[u], r);
        for v in u + 1..g.vertex_count() {
            if dist[v] != UNREACHED {
                p.add_edge(u, v).expect("distinct endpoints");
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> MultiGraph {
        MultiGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn zero_radius_is_the_center() {
        let sub = neighborhood(&path(4), &[2], 0).unwrap();
        assert_eq!(sub.vertex_map, vec![2]);
        assert_eq!(sub.graph.edge_count(), 0);
    }

    #[test]
    fn star_and_path_balls() {
        let star = MultiGraph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let sub = neighborhood(&star, &[0], 1).unwrap();
        assert_eq!(sub.graph.vertex_count(), 5);
        assert_eq!(sub.graph.edge_count(), 4);
        let sub = neighborhood(&path(6), &[0], 2).unwrap();
        assert_eq!(sub.vertex_map, vec![0, 1, 2]);
        assert_eq!(sub.edge_map, vec![0, 1]);
        assert_eq!(neighborhood(&path(3), &[], 1), Err(Error::EmptyCenter));
    }

    #[test]
    fn powers() {
        let p = power_graph(&path(4), 2);
        assert_eq!(p.edges(), &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let full = power_graph(&path(5), 4);
        assert_eq!(full.edge_count(), 10);
        let multi = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(power_graph(&multi, 1).edge_count(), 1);
    }
}
