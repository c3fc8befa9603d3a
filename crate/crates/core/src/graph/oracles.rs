//! Exact density oracles: arboricity by subset enumeration or max-flow,
//! pseudo-arboricity by max-flow, and degeneracy by peeling.

use serde::{Deserialize, Serialize};

use super::{EdgeId, MultiGraph, Orientation, Vertex};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;

/// Largest vertex count the subset-enumeration oracle accepts by default.
pub const EXACT_ORACLE_LIMIT: usize = 18;

/// A density value together with a vertex subset attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityCertificate {
    pub value: usize,
    pub witness_vertices: Vec<Vertex>,
}

fn induced_edge_count(g: &MultiGraph, subset: &[Vertex]) -> usize {
    let mut inside = vec![false; g.vertex_count()];
    for &v in subset {
        inside[v] = true;
    }
    g.edges().iter().filter(|&&(u, v)| inside[u] && inside[v]).count()
}

/// `ceil(|E(S)| / (|S| - 1))`, or 0 for fewer than two vertices.
pub fn nash_williams_value(g: &MultiGraph, subset: &[Vertex]) -> usize {
    if subset.len() < 2 {
        return 0;
    }
    induced_edge_count(g, subset).div_ceil(subset.len() - 1)
}

/// `ceil(|E(S)| / |S|)`, or 0 for the empty set.
pub fn hakimi_value(g: &MultiGraph, subset: &[Vertex]) -> usize {
    if subset.is_empty() {
        return 0;
    }
    induced_edge_count(g, subset).div_ceil(subset.len())
}

pub fn nash_williams_arboricity(g: &MultiGraph) -> Result<DensityCertificate> {
    nash_williams_arboricity_with_limit(g, EXACT_ORACLE_LIMIT)
}

/// Maximum of `ceil(|E(S)| / (|S| - 1))` over all vertex subsets with at least
/// two vertices. Edge counts of subsets are built incrementally by peeling
/// off the lowest vertex of each mask.
pub fn nash_williams_arboricity_with_limit(g: &MultiGraph, limit: usize) -> Result<DensityCertificate> {
    let n = g.vertex_count();
    if n > limit || n >= usize::BITS as usize - 1 {
        return Err(Error::GraphTooLarge { n, limit });
    }
    let mut mult = vec![0u32; n * n];
    for &(u, v) in g.edges() {
        mult[u * n + v] += 1;
        mult[v * n + u] += 1;
    }
    let full = 1usize << n;
    let mut inner = vec![0u32; full];
    let mut best = DensityCertificate { value: 0, witness_vertices: Vec::new() };
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut count = inner[rest];
        let mut bits = rest;
        while bits != 0 {
            let w = bits.trailing_zeros() as usize;
            count += mult[low * n + w];
            bits &= bits - 1;
        }
        inner[mask] = count;
        let size = mask.count_ones() as usize;
        if size >= 2 {
            let value = (count as usize).div_ceil(size - 1);
            if value > best.value {
                best = DensityCertificate {
                    value,
                    witness_vertices: (0..n).filter(|&v| mask >> v & 1 == 1).collect(),
                };
            }
        }
    }
    Ok(best)
}

/// Routes every edge to one endpoint, each vertex `v` absorbing at most
/// `k - loops[v]`. Returns the network, the arc ids per edge, and whether all
/// edges were routed.
fn orientation_flow(g: &MultiGraph, loops: &[usize], k: usize) -> (FlowNetwork, Vec<(usize, usize)>, bool) {
    let n = g.vertex_count();
    let m = g.edge_count();
    let source = n + m;
    let sink = source + 1;
    let mut net = FlowNetwork::new(n + m + 2);
    let mut arcs = Vec::with_capacity(m);
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        net.add_arc(source, n + e, 1);
        let to_u = net.add_arc(n + e, u, m as i64 + 1);
        let to_v = net.add_arc(n + e, v, m as i64 + 1);
        arcs.push((to_u, to_v));
    }
    for v in 0..n {
        net.add_arc(v, sink, k.saturating_sub(loops[v]) as i64);
    }
    let routed = net.max_flow(source, sink) as usize;
    (net, arcs, routed == m)
}

pub fn pseudo_arboricity(g: &MultiGraph) -> (DensityCertificate, Orientation) {
    pseudo_arboricity_with_loops(g, &vec![0; g.vertex_count()])
}

/// Pseudo-arboricity of `g` with `loops[v]` extra loops at `v`, each loop
/// counting once toward the outdegree of its vertex. The witness is the
/// source side of a minimum cut one below the optimum.
pub fn pseudo_arboricity_with_loops(g: &MultiGraph, loops: &[usize]) -> (DensityCertificate, Orientation) {
    let n = g.vertex_count();
    let m = g.edge_count();
    let max_loops = loops.iter().copied().max().unwrap_or(0);
    let total = m + loops.iter().sum::<usize>();
    let mut lo = max_loops.max(if n == 0 { 0 } else { total.div_ceil(n) });
    let mut hi = max_loops + (0..n).map(|v| g.degree(v)).max().unwrap_or(0);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if orientation_flow(g, loops, mid).2 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let value = lo;
    let (net, arcs, ok) = orientation_flow(g, loops, value);
    debug_assert!(ok);
    let tails: Vec<Vertex> = g
        .edges()
        .iter()
        .zip(&arcs)
        .map(|(&(u, v), &(to_u, _))| if net.flow(to_u) > 0 { u } else { v })
        .collect();
    let orientation = Orientation::from_tails(g, &tails);
    let witness_vertices = if value == 0 {
        Vec::new()
    } else {
        let (below, _, _) = orientation_flow(g, loops, value - 1);
        let reach = below.residual_reachable(n + m);
        (0..n).filter(|&v| reach[v]).collect()
    };
    (DensityCertificate { value, witness_vertices }, orientation)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    pub value: usize,
    /// Vertices in removal order; orienting toward later vertices gives an
    /// acyclic orientation of outdegree `value`.
    pub order: Vec<Vertex>,
}

/// Repeated minimum-degree removal with bucket queues, ties broken by the
/// smallest vertex index.
pub fn degeneracy(g: &MultiGraph) -> Degeneracy {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<std::collections::BTreeSet<Vertex>> = vec![Default::default(); max_deg + 1];
    for v in 0..n {
        buckets[deg[v]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut value = 0;
    let mut low: usize = 0;
    for _ in 0..n {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop_first().expect("nonempty bucket");
        value = value.max(low);
        removed[v] = true;
        order.push(v);
        for &e in g.incident(v) {
            let w = g.other(e, v);
            if !removed[w] {
                buckets[deg[w]].remove(&w);
                deg[w] -= 1;
                buckets[deg[w]].insert(w);
                low = low.min(deg[w]);
            }
        }
    }
    Degeneracy { value, order }
}

/// Largest vertex count for which `arboricity_upper_bound` runs the flow
/// oracle instead of falling back to cheap bounds.
pub const FLOW_ORACLE_LIMIT: usize = 1024;

/// Whether some vertex set `S` containing `root` has more than
/// `k (|S| - 1)` edges. Returns that set if so. Selecting edges earns 1 each
/// and every vertex other than the root costs `k`; `S` exists exactly when the
/// best selection has positive value, i.e. when not every source arc
/// saturates.
fn overfull_set(g: &MultiGraph, edges: &[EdgeId], root: Vertex, k: usize) -> Option<Vec<Vertex>> {
    let n = g.vertex_count();
    let m = edges.len();
    let source = n + m;
    let sink = source + 1;
    let mut net = FlowNetwork::new(n + m + 2);
    let mut touched = vec![false; n];
    for (i, &e) in edges.iter().enumerate() {
        let (u, v) = g.endpoints(e);
        net.add_arc(source, n + i, 1);
        net.add_arc(n + i, u, m as i64 + 1);
        net.add_arc(n + i, v, m as i64 + 1);
        touched[u] = true;
        touched[v] = true;
    }
    for v in (0..n).filter(|&v| touched[v] && v != root) {
        net.add_arc(v, sink, k as i64);
    }
    if net.max_flow(source, sink) as usize == m {
        return None;
    }
    let reach = net.residual_reachable(source);
    Some((0..n).filter(|&v| reach[v] || v == root).collect())
}

/// Exact arboricity for graphs of any size via one max-flow per vertex and
/// candidate value. Candidates start at the larger of the pseudo-arboricity
/// and the densest component, which is usually already the answer.
pub fn arboricity_by_flow(g: &MultiGraph) -> DensityCertificate {
    let (count, component) = g.components();
    let mut members: Vec<Vec<Vertex>> = vec![Vec::new(); count];
    for v in g.vertices() {
        members[component[v]].push(v);
    }
    let mut edges: Vec<Vec<EdgeId>> = vec![Vec::new(); count];
    for e in g.edge_ids() {
        edges[component[g.endpoints(e).0]].push(e);
    }
    let (pseudo, _) = pseudo_arboricity(g);
    let mut best = pseudo;
    for c in 0..count {
        let value = nash_williams_value(g, &members[c]);
        if value > best.value {
            best = DensityCertificate { value, witness_vertices: members[c].clone() };
        }
    }
    'search: loop {
        let k = best.value;
        for c in 0..count {
            if edges[c].is_empty() {
                continue;
            }
            for &root in &members[c] {
                if let Some(set) = overfull_set(g, &edges[c], root, k) {
                    best = DensityCertificate { value: nash_williams_value(g, &set), witness_vertices: set };
                    debug_assert!(best.value > k);
                    continue 'search;
                }
            }
        }
        return best;
    }
}

/// Best available upper bound on the arboricity; exact up to
/// `FLOW_ORACLE_LIMIT` vertices.
pub fn arboricity_upper_bound(g: &MultiGraph) -> usize {
    if let Ok(cert) = nash_williams_arboricity(g) {
        return cert.value;
    }
    if g.vertex_count() <= FLOW_ORACLE_LIMIT {
        return arboricity_by_flow(g).value;
    }
    let a_star = pseudo_arboricity(g).0.value;
    let mut bound = degeneracy(g).value.min(2 * a_star);
    if g.is_simple() {
        bound = bound.min(a_star + 1);
    }
    bound
}
