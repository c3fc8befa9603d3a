//! Network decompositions of power graphs and stochastic decompositions,
//! both built by exponentially shifted clustering.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, EdgeId, MultiGraph, Vertex, UNREACHED};
use crate::params::log2_ceil;
use crate::runtime::{RandomStream, RoundLedger};

/// Constants of the clustered decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NdConfig {
    /// Rate of the exponential shifts.
    pub rate: f64,
    /// Class cap is `class_factor * ceil(log2 n)`.
    pub class_factor: usize,
    /// Strong diameter cap is `diameter_factor * ceil(log2 n)`.
    pub diameter_factor: usize,
    pub max_attempts: usize,
}

impl Default for NdConfig {
    fn default() -> Self {
        Self { rate: 0.5, class_factor: 3, diameter_factor: 9, max_attempts: 64 }
    }
}

impl NdConfig {
    pub fn class_cap(&self, n: usize) -> usize {
        self.class_factor * log2_ceil(n)
    }

    pub fn diameter_cap(&self, n: usize) -> usize {
        self.diameter_factor * log2_ceil(n)
    }

    /// Largest admissible shift; clusters have radius at most this.
    fn shift_cap(&self, n: usize) -> f64 {
        (self.diameter_cap(n) / 2) as f64
    }
}

/// Vertex partition into classes of clusters. Distances are hops in the
/// power graph `G^radius` the decomposition was built on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkDecomposition {
    #[serde(rename = "classes")]
    pub class_of: Vec<usize>,
    #[serde(rename = "clusters")]
    pub cluster_of: Vec<usize>,
    /// Strong diameter bound of every cluster, in power-graph hops.
    #[serde(rename = "D")]
    pub diameter: usize,
    pub chi: usize,
    #[serde(skip)]
    pub power: usize,
    #[serde(skip)]
    pub attempts: usize,
}

impl NetworkDecomposition {
    pub fn cluster_count(&self) -> usize {
        self.cluster_of.iter().map(|&c| c + 1).max().unwrap_or(0)
    }

    /// Members of every cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.cluster_count()];
        for (v, &c) in self.cluster_of.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    /// Cluster ids of each class, ascending.
    pub fn clusters_by_class(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.chi];
        let mut seen = vec![false; self.cluster_count()];
        for (v, &c) in self.cluster_of.iter().enumerate() {
            if !seen[c] {
                seen[c] = true;
                out[self.class_of[v]].push(c);
            }
        }
        for list in &mut out {
            list.sort_unstable();
        }
        out
    }

    /// Diameter bound measured in hops of the base graph.
    pub fn weak_diameter(&self) -> usize {
        self.diameter * self.power
    }
}

/// Value `shift - distance` carried from a center, ordered by value and then
/// by smaller center index.
#[derive(Clone, Copy, Debug)]
struct Label {
    value: f64,
    center: Vertex,
    at: Vertex,
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Label {}
impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value
            .total_cmp(&other.value)
            .then_with(|| other.center.cmp(&self.center))
            .then_with(|| other.at.cmp(&self.at))
    }
}

/// True when `(value, center)` beats `other`: higher value, then smaller
/// center.
fn beats(value: f64, center: Vertex, other: (f64, Vertex)) -> bool {
    value.total_cmp(&other.0).then_with(|| other.1.cmp(&center)) == Ordering::Greater
}

/// Records an offer in the pending labels of one vertex and reports whether
/// it can still end up among the best `keep`. An offer beaten by `keep`
/// pending labels of other centers never can.
fn offer(pending: &mut Vec<(f64, Vertex)>, keep: usize, value: f64, center: Vertex) -> bool {
    if let Some(i) = pending.iter().position(|&(_, c)| c == center) {
        if !beats(value, center, pending[i]) {
            return false;
        }
        pending[i].0 = value;
    } else if pending.len() < keep {
        pending.push((value, center));
    } else if beats(value, center, pending[keep - 1]) {
        pending[keep - 1] = (value, center);
    } else {
        return false;
    }
    pending.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    true
}

/// Best `keep` labels per vertex from distinct centers, exploring values no
/// lower than `floor`. `neighbors` fills the buffer with the adjacency of the
/// graph the clustering runs on.
fn top_labels(
    n: usize,
    shifts: &[(Vertex, f64)],
    keep: usize,
    floor: f64,
    mut neighbors: impl FnMut(Vertex, &mut Vec<Vertex>),
) -> Vec<Vec<(f64, Vertex)>> {
    let mut labels: Vec<Vec<(f64, Vertex)>> = vec![Vec::new(); n];
    let mut pending: Vec<Vec<(f64, Vertex)>> = vec![Vec::new(); n];
    for &(v, s) in shifts {
        offer(&mut pending[v], keep, s, v);
    }
    let mut heap: BinaryHeap<Label> =
        shifts.iter().map(|&(v, s)| Label { value: s, center: v, at: v }).collect();
    let mut adjacent = Vec::new();
    while let Some(Label { value, center, at }) = heap.pop() {
        let slot = &mut labels[at];
        if slot.len() >= keep || slot.iter().any(|&(_, c)| c == center) {
            continue;
        }
        slot.push((value, center));
        if value - 1.0 < floor {
            continue;
        }
        adjacent.clear();
        neighbors(at, &mut adjacent);
        for &y in &adjacent {
            if labels[y].len() < keep && offer(&mut pending[y], keep, value - 1.0, center) {
                heap.push(Label { value: value - 1.0, center, at: y });
            }
        }
    }
    labels
}

/// Vertices within `depth` hops of a source, reusing its buffers between
/// searches.
struct Ball {
    dist: Vec<usize>,
    seen: Vec<Vertex>,
    queue: VecDeque<Vertex>,
}

impl Ball {
    fn new(n: usize) -> Self {
        Self { dist: vec![UNREACHED; n], seen: Vec::new(), queue: VecDeque::new() }
    }

    fn around(&mut self, g: &MultiGraph, source: Vertex, depth: usize, mut visit: impl FnMut(Vertex)) {
        for &v in &self.seen {
            self.dist[v] = UNREACHED;
        }
        self.seen.clear();
        self.dist[source] = 0;
        self.seen.push(source);
        self.queue.push_back(source);
        while let Some(x) = self.queue.pop_front() {
            if x != source {
                visit(x);
            }
            if self.dist[x] == depth {
                continue;
            }
            for &e in g.incident(x) {
                let y = g.other(e, x);
                if self.dist[y] == UNREACHED {
                    self.dist[y] = self.dist[x] + 1;
                    self.seen.push(y);
                    self.queue.push_back(y);
                }
            }
        }
    }
}

fn draw_shifts(members: &[Vertex], rate: f64, stream: &RandomStream) -> Vec<(Vertex, f64)> {
    let exp = Exp::new(rate).expect("positive rate");
    let mut rng = stream.rng();
    members.iter().map(|&v| (v, exp.sample(&mut rng))).collect()
}

/// A `(D, chi)` decomposition of `G^power` with the default constants.
pub fn network_decomposition(
    g: &MultiGraph,
    power: usize,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<NetworkDecomposition> {
    network_decomposition_with(g, power, &NdConfig::default(), stream, ledger)
}

pub fn network_decomposition_with(
    g: &MultiGraph,
    power: usize,
    config: &NdConfig,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<NetworkDecomposition> {
    let power = power.max(1);
    let n = g.vertex_count();
    let chi_cap = config.class_cap(n);
    let shift_cap = config.shift_cap(n);
    ledger.charge("nd/carve", shift_cap as u64 * power as u64, chi_cap as u64);
    for attempt in 0..config.max_attempts {
        if let Some(mut nd) = carve(g, power, config, &stream.derive("nd-attempt", attempt as u64)) {
            nd.attempts = attempt + 1;
            debug_assert!(nd.chi <= chi_cap && nd.diameter as f64 <= 2.0 * shift_cap);
            return Ok(nd);
        }
    }
    Err(Error::DecompositionFailed { attempts: config.max_attempts })
}

fn carve(g: &MultiGraph, power: usize, config: &NdConfig, stream: &RandomStream) -> Option<NetworkDecomposition> {
    let n = g.vertex_count();
    let chi_cap = config.class_cap(n);
    let shift_cap = config.shift_cap(n);
    let mut class_of = vec![usize::MAX; n];
    let mut cluster_of = vec![usize::MAX; n];
    let mut next_cluster = 0;
    let mut radius = 0usize;

    // Components that fit inside one power-graph ball become single clusters.
    let (count, comp) = g.components();
    let mut firsts = vec![usize::MAX; count];
    for v in (0..n).rev() {
        firsts[comp[v]] = v;
    }
    let mut whole = vec![false; count];
    for (k, &v0) in firsts.iter().enumerate() {
        let ecc = bfs_distances(g, &[v0], usize::MAX - 1).into_iter().filter(|&d| d != UNREACHED).max().unwrap_or(0);
        if 2 * ecc <= power {
            whole[k] = true;
            radius = radius.max(usize::from(ecc > 0));
        }
    }
    let mut class = 0;
    let mut used_shortcut = false;
    for k in 0..count {
        if whole[k] {
            used_shortcut = true;
            for v in (0..n).filter(|&v| comp[v] == k) {
                class_of[v] = 0;
                cluster_of[v] = next_cluster;
            }
            next_cluster += 1;
        }
    }
    let mut remaining: Vec<Vertex> = (0..n).filter(|&v| class_of[v] == usize::MAX).collect();
    let mut alive: Vec<bool> = (0..n).map(|v| class_of[v] == usize::MAX).collect();
    let mut ball = Ball::new(n);
    while !remaining.is_empty() {
        if class >= chi_cap {
            return None;
        }
        let shifts = draw_shifts(&remaining, config.rate, &stream.derive("shift", class as u64));
        if shifts.iter().any(|&(_, s)| s > shift_cap) {
            return None;
        }
        let mut shift_of = vec![0.0; n];
        for &(v, s) in &shifts {
            shift_of[v] = s;
        }
        let labels = top_labels(n, &shifts, 2, -2.0, |x, out| {
            ball.around(g, x, power, |y| {
                if alive[y] {
                    out.push(y);
                }
            })
        });
        let mut center_cluster: HashMap<Vertex, usize> = HashMap::new();
        let mut kept = Vec::new();
        for &v in &remaining {
            let l = &labels[v];
            let gap = if l.len() >= 2 { l[0].0 - l[1].0 } else { f64::INFINITY };
            if gap > 2.0 {
                let (best, center) = l[0];
                radius = radius.max((shift_of[center] - best).round() as usize);
                let id = *center_cluster.entry(center).or_insert_with(|| {
                    next_cluster += 1;
                    next_cluster - 1
                });
                kept.push((v, id));
            }
        }
        for &(v, id) in &kept {
            class_of[v] = class + usize::from(used_shortcut);
            cluster_of[v] = id;
            alive[v] = false;
        }
        remaining.retain(|&v| alive[v]);
        class += 1;
    }
    let chi = class + usize::from(used_shortcut);
    if chi > chi_cap.max(1) {
        return None;
    }
    Some(renumber(NetworkDecomposition {
        class_of,
        cluster_of,
        diameter: 2 * radius,
        chi,
        power,
        attempts: 0,
    }))
}

/// Numbers clusters in order of their smallest member.
fn renumber(mut nd: NetworkDecomposition) -> NetworkDecomposition {
    let mut map: HashMap<usize, usize> = HashMap::new();
    for c in nd.cluster_of.iter_mut() {
        let next = map.len();
        *c = *map.entry(*c).or_insert(next);
    }
    nd
}

/// Checks the decomposition against `G^power`: same-class clusters are
/// non-adjacent and every cluster has strong diameter at most `D`.
pub fn check_network_decomposition(g: &MultiGraph, nd: &NetworkDecomposition) -> std::result::Result<(), String> {
    let n = g.vertex_count();
    if nd.class_of.len() != n || nd.cluster_of.len() != n {
        return Err("wrong length".into());
    }
    let power = nd.power.max(1);
    let adj: Vec<Vec<Vertex>> = (0..n)
        .map(|x| {
            let dist = bfs_distances(g, &[x], power);
            (0..n).filter(|&y| y != x && dist[y] != UNREACHED).collect()
        })
        .collect();
    for x in 0..n {
        if nd.class_of[x] >= nd.chi {
            return Err(format!("vertex {x} has class {} >= chi {}", nd.class_of[x], nd.chi));
        }
        for &y in &adj[x] {
            if nd.class_of[x] == nd.class_of[y] && nd.cluster_of[x] != nd.cluster_of[y] {
                return Err(format!("clusters of {x} and {y} share class {} and touch", nd.class_of[x]));
            }
        }
    }
    for members in nd.clusters() {
        for &s in &members {
            let mut dist = vec![UNREACHED; n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if dist[y] == UNREACHED && nd.cluster_of[y] == nd.cluster_of[s] {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            if let Some(&t) = members.iter().find(|&&t| dist[t] == UNREACHED || dist[t] > nd.diameter) {
                return Err(format!("cluster of {s} reaches {t} only beyond D = {}", nd.diameter));
            }
        }
    }
    Ok(())
}

/// Random kept-edge set whose components have bounded strong diameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StochasticDecomposition {
    pub kept_edges: Vec<EdgeId>,
    pub component_of: Vec<usize>,
    #[serde(rename = "D")]
    pub diameter: usize,
    pub beta: f64,
    pub attempts: usize,
}

/// Diameter cap of a stochastic decomposition is `factor * ceil(log2 n) / beta`.
pub const STOCHASTIC_DIAMETER_FACTOR: f64 = 6.0;

/// Every vertex joins the center maximizing `shift - distance`, with shifts
/// of rate `beta / 2`; edges inside a cluster are kept.
pub fn stochastic_decomposition(
    g: &MultiGraph,
    beta: f64,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<StochasticDecomposition> {
    if !(beta > 0.0 && beta <= 0.5) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 1/2], got {beta}")));
    }
    let n = g.vertex_count();
    let cap = STOCHASTIC_DIAMETER_FACTOR * log2_ceil(n) as f64 / beta;
    ledger.charge("stochastic/grow", (cap / 2.0).ceil() as u64, 1);
    let all: Vec<Vertex> = g.vertices().collect();
    for attempt in 0..64 {
        let shifts = draw_shifts(&all, beta / 2.0, &stream.derive("sd-attempt", attempt));
        if shifts.iter().any(|&(_, s)| 2.0 * s > cap) {
            continue;
        }
        let labels = top_labels(n, &shifts, 1, 0.0, |x, out| out.extend(g.incident(x).iter().map(|&e| g.other(e, x))));
        let mut radius = 0usize;
        let center: Vec<Vertex> = (0..n)
            .map(|v| {
                let (best, c) = labels[v][0];
                radius = radius.max((shifts[c].1 - best).round() as usize);
                c
            })
            .collect();
        let kept_edges: Vec<EdgeId> = g.edge_ids().filter(|&e| {
            let (u, v) = g.endpoints(e);
            center[u] == center[v]
        }).collect();
        let mut ids: HashMap<Vertex, usize> = HashMap::new();
        let component_of = center
            .iter()
            .map(|&c| {
                let next = ids.len();
                *ids.entry(c).or_insert(next)
            })
            .collect();
        return Ok(StochasticDecomposition {
            kept_edges,
            component_of,
            diameter: 2 * radius,
            beta,
            attempts: attempt as usize + 1,
        });
    }
    Err(Error::DecompositionFailed { attempts: 64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family, GeneratorSpec};

    #[test]
    fn single_vertex() {
        let g = MultiGraph::new(1);
        let nd = network_decomposition(&g, 1, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert_eq!((nd.chi, nd.cluster_count(), nd.diameter), (1, 1, 0));
    }

    #[test]
    fn clique_and_path_decompose() {
        let k5 = generate(&GeneratorSpec::new(Family::Gnp { n: 5, p: 1.0 }, 0)).unwrap();
        let nd = network_decomposition(&k5, 1, &RandomStream::new(1), &mut RoundLedger::new()).unwrap();
        check_network_decomposition(&k5, &nd).unwrap();
        assert!(nd.chi <= 3 * log2_ceil(5));
        let path = generate(&GeneratorSpec::new(Family::PathMultigraph { l: 200, k: 1 }, 0)).unwrap();
        for seed in 0..5 {
            let nd = network_decomposition(&path, 2, &RandomStream::new(seed), &mut RoundLedger::new()).unwrap();
            check_network_decomposition(&path, &nd).unwrap();
            assert!(nd.diameter <= 9 * log2_ceil(200));
            assert!(nd.cluster_count() > 1);
        }
    }

    #[test]
    fn whole_component_shortcut() {
        let path = generate(&GeneratorSpec::new(Family::PathMultigraph { l: 9, k: 1 }, 0)).unwrap();
        let nd = network_decomposition(&path, 16, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert_eq!(nd.cluster_count(), 1);
        assert_eq!(nd.chi, 1);
        check_network_decomposition(&path, &nd).unwrap();
    }

    #[test]
    fn stochastic_components_match_kept_edges() {
        let path = generate(&GeneratorSpec::new(Family::PathMultigraph { l: 64, k: 1 }, 0)).unwrap();
        let sd = stochastic_decomposition(&path, 0.5, &RandomStream::new(3), &mut RoundLedger::new()).unwrap();
        assert!(sd.diameter as f64 <= 6.0 * 6.0 / 0.5);
        let mut dsu = crate::DisjointSets::new(64);
        for &e in &sd.kept_edges {
            let (u, v) = path.endpoints(e);
            dsu.union(u, v);
        }
        for u in 0..64 {
            for v in 0..64 {
                assert_eq!(dsu.same(u, v), sd.component_of[u] == sd.component_of[v]);
            }
        }
        let single = stochastic_decomposition(&MultiGraph::new(1), 0.3, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert!(single.kept_edges.is_empty());
        assert!(stochastic_decomposition(&path, 0.7, &RandomStream::new(0), &mut RoundLedger::new()).is_err());
    }
}
