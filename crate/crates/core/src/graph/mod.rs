//! Loopless multigraphs, orientations, and the exact density oracles.

mod generators;
mod io;
mod neighborhood;
mod oracles;

pub use generators::{generate, Family, GeneratorSpec};
pub use io::{parse_edge_list, to_edge_list};
pub use neighborhood::{bfs_distances, neighborhood, power_graph, Subgraph, UNREACHED};
pub use oracles::{
    arboricity_upper_bound, degeneracy, hakimi_value, nash_williams_arboricity,
    nash_williams_arboricity_with_limit, nash_williams_value, pseudo_arboricity,
    pseudo_arboricity_with_loops, arboricity_by_flow, Degeneracy, DensityCertificate, EXACT_ORACLE_LIMIT, FLOW_ORACLE_LIMIT,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type EdgeId = usize;

/// Loopless multigraph on vertices `0..n`. Each edge keeps the position it was
/// added at as its [`EdgeId`]; parallel edges are distinct ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<EdgeId>>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        Self { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::Loop(u));
        }
        let id = self.edges.len();
        self.edges.push((u, v));
        self.adj[u].push(id);
        self.adj[v].push(id);
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e]
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    pub fn edge_ids(&self) -> std::ops::Range<EdgeId> {
        0..self.edges.len()
    }

    /// True when no two edges join the same pair.
    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.edges.len());
        self.edges.iter().all(|&(u, v)| seen.insert((u.min(v), u.max(v))))
    }

    /// Same vertex set, keeping only the listed edges (renumbered in order).
    /// Returns the subgraph and the map from new to old edge ids.
    pub fn edge_subgraph(&self, keep: &[EdgeId]) -> (MultiGraph, Vec<EdgeId>) {
        let mut g = MultiGraph::new(self.n);
        for &e in keep {
            let (u, v) = self.edges[e];
            g.add_edge(u, v).expect("edges of a valid graph");
        }
        (g, keep.to_vec())
    }

    /// Connected component index per vertex, numbered by smallest member.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut comp = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &e in &self.adj[x] {
                    let y = self.other(e, x);
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }
}

/// Direction per edge: `true` means the edge points toward its second
/// endpoint `v`, so its tail is the first endpoint `u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<u8>", into = "Vec<u8>")]
pub struct Orientation {
    toward_v: Vec<bool>,
}

impl From<Vec<u8>> for Orientation {
    fn from(bits: Vec<u8>) -> Self {
        Self { toward_v: bits.into_iter().map(|b| b != 0).collect() }
    }
}

impl From<Orientation> for Vec<u8> {
    fn from(o: Orientation) -> Self {
        o.toward_v.into_iter().map(u8::from).collect()
    }
}

impl Orientation {
    pub fn from_flags(toward_v: Vec<bool>) -> Self {
        Self { toward_v }
    }

    /// Every edge pointed toward its higher-indexed endpoint.
    pub fn toward_higher(g: &MultiGraph) -> Self {
        Self { toward_v: g.edges().iter().map(|&(u, v)| v > u).collect() }
    }

    /// Orients every edge away from `tail[e]`.
    pub fn from_tails(g: &MultiGraph, tails: &[Vertex]) -> Self {
        Self {
            toward_v: g.edge_ids().map(|e| g.endpoints(e).0 == tails[e]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.toward_v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.toward_v.is_empty()
    }

    pub fn flags(&self) -> &[bool] {
        &self.toward_v
    }

    pub fn tail(&self, g: &MultiGraph, e: EdgeId) -> Vertex {
        let (u, v) = g.endpoints(e);
        if self.toward_v[e] {
            u
        } else {
            v
        }
    }

    pub fn head(&self, g: &MultiGraph, e: EdgeId) -> Vertex {
        let (u, v) = g.endpoints(e);
        if self.toward_v[e] {
            v
        } else {
            u
        }
    }

    pub fn reverse(&mut self, e: EdgeId) {
        self.toward_v[e] = !self.toward_v[e];
    }

    /// Points `e` away from `tail`.
    pub fn set_tail(&mut self, g: &MultiGraph, e: EdgeId, tail: Vertex) {
        self.toward_v[e] = g.endpoints(e).0 == tail;
    }

    pub fn outdegrees(&self, g: &MultiGraph) -> Vec<usize> {
        let mut out = vec![0; g.vertex_count()];
        for e in g.edge_ids() {
            out[self.tail(g, e)] += 1;
        }
        out
    }

    pub fn max_outdegree(&self, g: &MultiGraph) -> usize {
        self.outdegrees(g).into_iter().max().unwrap_or(0)
    }

    /// Out-edges of every vertex, each list in increasing edge id.
    pub fn out_edges(&self, g: &MultiGraph) -> Vec<Vec<EdgeId>> {
        let mut out = vec![Vec::new(); g.vertex_count()];
        for e in g.edge_ids() {
            out[self.tail(g, e)].push(e);
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("orientation serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_range() {
        let mut g = MultiGraph::new(3);
        assert_eq!(g.add_edge(1, 1), Err(Error::Loop(1)));
        assert!(matches!(g.add_edge(0, 3), Err(Error::VertexOutOfRange { vertex: 3, .. })));
        assert_eq!(g.add_edge(0, 1), Ok(0));
        assert_eq!(g.add_edge(1, 0), Ok(1));
        assert!(!g.is_simple());
        assert_eq!(g.degree(1), 2);
    }

    #[test]
    fn orientation_json_and_degrees() {
        let g = MultiGraph::from_edges(3, [(0, 1), (2, 1), (0, 2)]).unwrap();
        let o = Orientation::toward_higher(&g);
        assert_eq!(o.to_json(), "[1,0,1]");
        assert_eq!(o.outdegrees(&g), vec![2, 1, 0]);
        let back: Orientation = serde_json::from_str("[1,0,1]").unwrap();
        assert_eq!(back, o);
    }

    #[test]
    fn components_numbered_by_smallest_member() {
        let g = MultiGraph::from_edges(5, [(3, 4), (0, 2)]).unwrap();
        assert_eq!(g.components(), (3, vec![0, 1, 0, 2, 2]));
    }
}
