//! Edge removal around a cluster so that no monochromatic path leaves the
//! outer ball. Removed edges form the leftover graph; each is charged to
//! one endpoint, which serves as its tail in a leftover orientation.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::basic::{acyclic_orientation, reduce_forest_diameter};
use crate::coloring::{Color, PartialColoring};
use crate::error::Result;
use crate::graph::{EdgeId, MultiGraph, Orientation, Vertex};
use crate::params::Epsilon;
use crate::runtime::{RandomStream, RoundLedger};

use super::AlgorithmParams;

/// A removed edge and the endpoint it is charged to.
pub type Removal = (EdgeId, Vertex);

/// One cluster's view: `inner` marks `N^{R'}(C)`, `outer` marks
/// `N^{R+R'}(C)`.
pub struct CutScope<'a> {
    pub g: &'a MultiGraph,
    pub coloring: &'a PartialColoring,
    pub removed: &'a [bool],
    pub inner: &'a [bool],
    pub outer: &'a [bool],
}

impl CutScope<'_> {
    /// Surviving edges inside the outer ball but not inside the inner one.
    pub fn annulus_edges(&self) -> Vec<EdgeId> {
        self.g
            .edge_ids()
            .filter(|&e| {
                let (u, v) = self.g.endpoints(e);
                !self.removed[e] && self.outer[u] && self.outer[v] && !(self.inner[u] && self.inner[v])
            })
            .collect()
    }

    /// The forests `H_c`: colored annulus edges grouped by color.
    pub fn annulus_forests(&self) -> BTreeMap<Color, Vec<EdgeId>> {
        let mut out: BTreeMap<Color, Vec<EdgeId>> = BTreeMap::new();
        for e in self.annulus_edges() {
            if let Some(c) = self.coloring.get(e) {
                out.entry(c).or_default().push(e);
            }
        }
        out
    }

    /// True when no color class connects the inner ball to a vertex
    /// outside the outer ball.
    pub fn is_good(&self) -> bool {
        let g = self.g;
        let mut seen: HashMap<(Vertex, Color), ()> = HashMap::new();
        let mut queue = VecDeque::new();
        for v in g.vertices().filter(|&v| self.inner[v]) {
            for &e in g.incident(v) {
                if let Some(c) = self.coloring.get(e).filter(|_| !self.removed[e]) {
                    if seen.insert((v, c), ()).is_none() {
                        queue.push_back((v, c));
                    }
                }
            }
        }
        while let Some((x, c)) = queue.pop_front() {
            if !self.outer[x] {
                return false;
            }
            for &e in g.incident(x) {
                if self.removed[e] || self.coloring.get(e) != Some(c) {
                    continue;
                }
                let y = g.other(e, x);
                if seen.insert((y, c), ()).is_none() {
                    queue.push_back((y, c));
                }
            }
        }
        true
    }
}

/// Diameter reduction of the annulus forests with `eps / (2T)`; every moved
/// edge is removed and charged to its higher endpoint.
pub fn cut_diameter(
    scope: &CutScope<'_>,
    params: &AlgorithmParams,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<Vec<Removal>> {
    let forests = scope.annulus_forests();
    if forests.is_empty() {
        return Ok(Vec::new());
    }
    let mut sub = PartialColoring::new(scope.g.edge_count());
    for (&c, edges) in &forests {
        for &e in edges {
            sub.set(e, c);
        }
    }
    let split = reduce_forest_diameter(scope.g, &sub, params.a_bound, params.diameter_eps(), stream, ledger)?;
    Ok(scope
        .g
        .edge_ids()
        .filter(|&e| split.moved.get(e).is_some())
        .map(|e| {
            let (u, v) = scope.g.endpoints(e);
            (e, u.max(v))
        })
        .collect())
}

/// Roots every tree of the forest `edges` (at its smallest preferred vertex
/// if it has one, else at its smallest vertex) and removes the edges whose
/// child depth is congruent to `offset` modulo `modulus`. Each removal is
/// charged to the child.
pub fn prune_by_depth(
    g: &MultiGraph,
    edges: &[EdgeId],
    preferred: impl Fn(Vertex) -> bool,
    modulus: usize,
    offset: usize,
) -> Vec<Removal> {
    let mut adj: BTreeMap<Vertex, Vec<(Vertex, EdgeId)>> = BTreeMap::new();
    for &e in edges {
        let (u, v) = g.endpoints(e);
        adj.entry(u).or_default().push((v, e));
        adj.entry(v).or_default().push((u, e));
    }
    let mut component: HashMap<Vertex, usize> = HashMap::new();
    let mut members: Vec<Vec<Vertex>> = Vec::new();
    for &s in adj.keys() {
        if component.contains_key(&s) {
            continue;
        }
        let id = members.len();
        let mut stack = vec![s];
        let mut list = Vec::new();
        component.insert(s, id);
        while let Some(x) = stack.pop() {
            list.push(x);
            for &(y, _) in &adj[&x] {
                if component.insert(y, id).is_none() {
                    stack.push(y);
                }
            }
        }
        members.push(list);
    }
    let mut removed = Vec::new();
    for list in members {
        let root = list
            .iter()
            .copied()
            .filter(|&v| preferred(v))
            .min()
            .unwrap_or_else(|| *list.iter().min().expect("nonempty tree"));
        let mut depth = HashMap::from([(root, 0usize)]);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let d = depth[&x];
            for &(y, e) in &adj[&x] {
                if depth.contains_key(&y) {
                    continue;
                }
                depth.insert(y, d + 1);
                if (d + 1) % modulus == offset % modulus {
                    removed.push((e, y));
                }
                queue.push_back(y);
            }
        }
    }
    removed.sort_unstable();
    removed
}

/// Per color, an offset `J_c` drawn uniformly from `1..=N` with
/// `N = floor(R / 2)`; edges at depth `J_c mod N` are removed, so surviving
/// monochromatic paths in the annulus are shorter than `R`.
pub fn cut_random_depth(scope: &CutScope<'_>, params: &AlgorithmParams, stream: &RandomStream) -> Vec<Removal> {
    let modulus = params.depth_modulus();
    let mut out = Vec::new();
    for (c, edges) in scope.annulus_forests() {
        let offset = stream.derive("depth-offset", c as u64).rng().random_range(1..=modulus);
        out.extend(prune_by_depth(scope.g, &edges, |v| scope.inner[v], modulus, offset));
    }
    out.sort_unstable();
    out
}

/// Fixed low-outdegree orientation and per-vertex removal counts shared by
/// every call of the out-edge strategy within one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutState {
    pub orientation: Orientation,
    pub load: Vec<usize>,
    pub load_cap: usize,
    pub removed: BTreeMap<EdgeId, Vertex>,
}

impl CutState {
    /// Orientation of outdegree at most `3 a*` from an H-partition.
    pub fn initialize(g: &MultiGraph, params: &AlgorithmParams, ledger: &mut RoundLedger) -> Result<Self> {
        let (orientation, _) = acyclic_orientation(g, Epsilon::new(1.0)?, Some(params.a_star_bound), ledger)?;
        Ok(Self {
            orientation,
            load: vec![0; g.vertex_count()],
            load_cap: params.load_cap(),
            removed: BTreeMap::new(),
        })
    }

    pub fn max_load(&self) -> usize {
        self.load.iter().copied().max().unwrap_or(0)
    }
}

/// Every underloaded vertex of the outer ball flips a `p`-coin and on
/// success removes one of its out-edges in the annulus, chosen uniformly.
pub fn cut_random_outedge(
    scope: &CutScope<'_>,
    params: &AlgorithmParams,
    stream: &RandomStream,
    state: &mut CutState,
) -> Vec<Removal> {
    let g = scope.g;
    let mut out = Vec::new();
    for v in g.vertices().filter(|&v| scope.outer[v]) {
        if state.load[v] >= state.load_cap {
            continue;
        }
        let mut rng = stream.derive("out-edge", v as u64).rng();
        if !rng.random_bool(params.p) {
            continue;
        }
        let candidates: Vec<EdgeId> = g
            .incident(v)
            .iter()
            .copied()
            .filter(|&e| {
                let (a, b) = g.endpoints(e);
                state.orientation.tail(g, e) == v
                    && !scope.removed[e]
                    && !state.removed.contains_key(&e)
                    && scope.outer[a]
                    && scope.outer[b]
                    && !(scope.inner[a] && scope.inner[b])
            })
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let e = candidates[rng.random_range(0..candidates.len())];
        state.removed.insert(e, v);
        state.load[v] += 1;
        out.push((e, v));
    }
    debug_assert!(state.max_load() <= state.load_cap);
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> MultiGraph {
        MultiGraph::from_edges(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn depth_trace() {
        let g = path(11);
        let edges: Vec<EdgeId> = g.edge_ids().collect();
        let removed = prune_by_depth(&g, &edges, |v| v == 0, 3, 1);
        let depths: Vec<Vertex> = removed.iter().map(|&(_, child)| child).collect();
        assert_eq!(depths, vec![1, 4, 7, 10]);
        let keep: Vec<EdgeId> = edges.iter().copied().filter(|e| removed.iter().all(|r| r.0 != *e)).collect();
        let mut run = 0;
        let mut longest = 0;
        for e in 0..10 {
            if keep.contains(&e) {
                run += 1;
                longest = longest.max(run);
            } else {
                run = 0;
            }
        }
        assert!(longest <= 6);
        assert!(prune_by_depth(&g, &[], |_| true, 3, 1).is_empty());
    }

    #[test]
    fn root_prefers_inner_vertices() {
        let g = path(7);
        let edges: Vec<EdgeId> = g.edge_ids().collect();
        let removed = prune_by_depth(&g, &edges, |v| v == 3, 2, 2);
        let children: Vec<Vertex> = removed.iter().map(|r| r.1).collect();
        assert_eq!(children, vec![1, 5]);
    }

    #[test]
    fn good_check_follows_colors() {
        let g = path(6);
        let coloring = PartialColoring::from_assignment(vec![Some(0), Some(0), Some(0), Some(1), Some(0)]);
        let inner = [true, true, false, false, false, false];
        let outer = [true, true, true, true, false, false];
        let mut removed = vec![false; 5];
        let scope = CutScope { g: &g, coloring: &coloring, removed: &removed, inner: &inner, outer: &outer };
        assert!(scope.is_good());
        assert_eq!(scope.annulus_edges(), vec![1, 2]);
        let leaky = PartialColoring::from_assignment(vec![Some(0), Some(0), Some(0), Some(0), None]);
        let scope = CutScope { g: &g, coloring: &leaky, removed: &removed, inner: &inner, outer: &outer };
        assert!(!scope.is_good());
        removed[2] = true;
        let scope = CutScope { g: &g, coloring: &leaky, removed: &removed, inner: &inner, outer: &outer };
        assert!(scope.is_good());
    }
}
