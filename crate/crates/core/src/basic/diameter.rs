//! Shortening the trees of a forest decomposition by moving a few edges
//! into a small side decomposition.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{Color, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{pseudo_arboricity, EdgeId, MultiGraph, Vertex};
use crate::params::{ceil_tol, log2_ceil, Epsilon};
use crate::runtime::{RandomStream, RoundLedger};
use crate::star::lll::{distributed_lll, LllInstance};
use crate::verify::color_classes;

use super::hpartition::acyclic_orientation;
use super::star3t::star_forest_3t;

/// Multiplier of `ceil(log2 n) / eps` in the tree-length threshold.
pub const LENGTH_FACTOR: f64 = 8.0;

/// Output trees have diameter below `DIAMETER_FACTOR * ceil(log2 n) / eps`.
pub const DIAMETER_FACTOR: f64 = LENGTH_FACTOR;

/// The edges kept with their colors (`kept`) and the side decomposition of
/// the moved edges (`moved`, colors from 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiameterSplit {
    pub kept: PartialColoring,
    pub moved: PartialColoring,
    pub sampled: Vec<EdgeId>,
    pub long_tree: Vec<EdgeId>,
    pub sampled_colors: usize,
    pub threshold: usize,
}

impl DiameterSplit {
    pub fn moved_colors(&self) -> usize {
        self.moved.color_count()
    }
}

/// Eccentricity of every vertex inside the forest formed by `edges`.
fn forest_eccentricities(g: &MultiGraph, edges: &[EdgeId]) -> HashMap<Vertex, usize> {
    let mut adj: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
    for &e in edges {
        let (u, v) = g.endpoints(e);
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let bfs = |s: Vertex| -> HashMap<Vertex, usize> {
        let mut dist = HashMap::from([(s, 0)]);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            for &y in &adj[&x] {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    };
    let mut vertices: Vec<Vertex> = adj.keys().copied().collect();
    vertices.sort_unstable();
    let mut ecc = HashMap::new();
    for v in vertices {
        if ecc.contains_key(&v) {
            continue;
        }
        let from_v = bfs(v);
        let far = |d: &HashMap<Vertex, usize>| d.iter().max_by_key(|&(&x, &dx)| (dx, std::cmp::Reverse(x))).map(|(&x, _)| x).unwrap();
        let a = far(&from_v);
        let from_a = bfs(a);
        let b = far(&from_a);
        let from_b = bfs(b);
        for (&x, &da) in &from_a {
            ecc.insert(x, da.max(from_b[&x]));
        }
    }
    ecc
}

/// Every vertex whose eccentricity in its tree reaches `threshold` gives up
/// all its edges of that class. The remaining trees have diameter below the
/// threshold.
fn cut_long_trees(g: &MultiGraph, classes: &BTreeMap<Color, Vec<EdgeId>>, threshold: usize) -> Vec<EdgeId> {
    let mut out = Vec::new();
    for edges in classes.values() {
        let ecc = forest_eccentricities(g, edges);
        for &e in edges {
            let (u, v) = g.endpoints(e);
            if ecc[&u] >= threshold || ecc[&v] >= threshold {
                out.push(e);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Splits a (list) forest decomposition into a part keeping its colors and a
/// part with at most about `ceil(eps * a)` fresh colors, both of diameter
/// below `8 ceil(log2 n) / eps`. Only colored edges take part.
pub fn reduce_forest_diameter(
    g: &MultiGraph,
    coloring: &PartialColoring,
    a: usize,
    eps: Epsilon,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<DiameterSplit> {
    let m = g.edge_count();
    let colored: Vec<EdgeId> = g.edge_ids().filter(|&e| coloring.get(e).is_some()).collect();
    let (sub, sub_to_g) = g.edge_subgraph(&colored);
    let threshold = ceil_tol(LENGTH_FACTOR * log2_ceil(g.vertex_count()) as f64 / eps.get());
    let sampled_colors = ceil_tol(eps.get() * a as f64 / 20.0);

    let a_star = pseudo_arboricity(&sub).0.value;
    let (orientation, _) = acyclic_orientation(&sub, Epsilon::new(0.01)?, Some(a_star), ledger)?;
    let out = orientation.out_edges(&sub);
    let mut kept = coloring.clone();
    let mut sampled_coloring = PartialColoring::new(m);
    let mut sampled = Vec::new();
    for (v, edges) in out.iter().enumerate() {
        let mut rng = stream.derive("sample", v as u64).rng();
        if !rng.random_bool(0.5) || edges.is_empty() {
            continue;
        }
        let amount = sampled_colors.min(edges.len());
        for (j, idx) in sample(&mut rng, edges.len(), amount).into_iter().enumerate() {
            let e = sub_to_g[edges[idx]];
            kept.clear(e);
            sampled_coloring.set(e, j as Color);
            sampled.push(e);
        }
    }
    sampled.sort_unstable();
    ledger.charge("diameter/sample", 1, 1);

    let mut long_tree = cut_long_trees(g, &color_classes(&kept), threshold);
    long_tree.extend(cut_long_trees(g, &color_classes(&sampled_coloring), threshold));
    long_tree.sort_unstable();
    ledger.charge("diameter/long-trees", threshold as u64, 1);
    for &e in &long_tree {
        kept.clear(e);
        sampled_coloring.clear(e);
    }

    let mut moved = sampled_coloring;
    if !long_tree.is_empty() {
        let (rest, rest_to_g) = g.edge_subgraph(&long_tree);
        let stars = star_forest_3t(&rest, Epsilon::new(0.01)?, None, ledger)?;
        for (i, &e) in rest_to_g.iter().enumerate() {
            moved.set(e, sampled_colors as Color + stars.get(i).expect("star split is total"));
        }
    }
    sampled.retain(|e| long_tree.binary_search(e).is_err());
    Ok(DiameterSplit { kept, moved, sampled, long_tree, sampled_colors, threshold })
}

/// Decolored edges together with the child endpoint each one is charged to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shortened {
    pub coloring: PartialColoring,
    pub removed: Vec<EdgeId>,
    pub tails: Vec<Vertex>,
    pub block: usize,
    pub resample_rounds: usize,
}

struct OffsetInstance {
    /// `(child, offset variable, depth below the block start)` per tree edge.
    items: Vec<(Vertex, usize, usize)>,
    by_vertex: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    block: usize,
    cap: usize,
}

impl OffsetInstance {
    fn deleted(&self, item: usize) -> bool {
        let (_, var, depth) = self.items[item];
        self.offsets[var] == depth
    }
}

impl LllInstance for OffsetInstance {
    fn event_count(&self) -> usize {
        self.by_vertex.len()
    }
    fn violated(&self, event: usize) -> bool {
        self.by_vertex[event].iter().filter(|&&i| self.deleted(i)).count() > self.cap
    }
    fn variables(&self, event: usize) -> Vec<usize> {
        self.by_vertex[event].iter().map(|&i| self.items[i].1).collect()
    }
    fn resample(&mut self, variable: usize, rng: &mut ChaCha8Rng) {
        self.offsets[variable] = rng.random_range(0..self.block);
    }
}

/// Cuts every tree of a short-diameter decomposition into pieces of
/// diameter at most `4z`, `z = ceil(40 rho / eps)`, by deleting parent edges
/// at a random depth offset inside each block of `z` levels below the first. Resampling
/// keeps at most `ceil(eps a / 20)` deletions charged to any vertex.
pub fn shorten_to_inv_eps(
    g: &MultiGraph,
    coloring: &PartialColoring,
    rho: f64,
    a: usize,
    eps: Epsilon,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<Shortened> {
    let n = g.vertex_count();
    let e = eps.get();
    let need = (log2_ceil(n) as f64 / e).min(rho * log2_ceil(g.max_degree().max(2)) as f64 / (e * e));
    if (a as f64) < need {
        return Err(Error::Precondition(format!("a = {a} is below {need:.1}")));
    }
    let block = ceil_tol(40.0 * rho / e).max(2);
    let cap = ceil_tol(e * a as f64 / 20.0).max(1);
    let mut items = Vec::new();
    let mut edge_of_item = Vec::new();
    let mut vars = 0;
    for edges in color_classes(coloring).values() {
        let mut adj: HashMap<Vertex, Vec<(Vertex, EdgeId)>> = HashMap::new();
        for &f in edges {
            let (u, v) = g.endpoints(f);
            adj.entry(u).or_default().push((v, f));
            adj.entry(v).or_default().push((u, f));
        }
        let mut roots: Vec<Vertex> = adj.keys().copied().collect();
        roots.sort_unstable();
        let mut depth: HashMap<Vertex, usize> = HashMap::new();
        let mut block_var: HashMap<Vertex, usize> = HashMap::new();
        for r in roots {
            if depth.contains_key(&r) {
                continue;
            }
            depth.insert(r, 0);
            block_var.insert(r, vars);
            vars += 1;
            let mut queue = VecDeque::from([r]);
            while let Some(x) = queue.pop_front() {
                let dx = depth[&x];
                let mut next = adj[&x].clone();
                next.sort_unstable();
                for (y, f) in next {
                    if depth.contains_key(&y) {
                        continue;
                    }
                    let dy = dx + 1;
                    depth.insert(y, dy);
                    let var = if dy.is_multiple_of(block) {
                        vars += 1;
                        vars - 1
                    } else {
                        block_var[&x]
                    };
                    block_var.insert(y, var);
                    if dy >= block {
                        items.push((y, var, dy % block));
                        edge_of_item.push(f);
                    }
                    queue.push_back(y);
                }
            }
        }
    }
    let mut by_vertex = vec![Vec::new(); n];
    for (i, &(v, _, _)) in items.iter().enumerate() {
        by_vertex[v].push(i);
    }
    let offsets = (0..vars).map(|var| stream.derive("offset", var as u64).rng().random_range(0..block)).collect();
    let mut instance = OffsetInstance { items, by_vertex, offsets, block, cap };
    ledger.charge("shorten/root", ceil_tol(LENGTH_FACTOR * log2_ceil(n) as f64 / e) as u64, 1);
    let outcome = distributed_lll(&mut instance, 8 * log2_ceil(n), 2 * block as u64, &stream.derive("lll", 0), ledger)?;
    let mut result = coloring.clone();
    let mut removed = Vec::new();
    let mut tails = Vec::new();
    for i in 0..instance.items.len() {
        if instance.deleted(i) {
            removed.push(edge_of_item[i]);
            tails.push(instance.items[i].0);
            result.clear(edge_of_item[i]);
        }
    }
    Ok(Shortened { coloring: result, removed, tails, block, resample_rounds: outcome.rounds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family, GeneratorSpec, Orientation};
    use crate::verify::{check_forest_decomposition, check_orientation, max_color_diameter};

    fn path(n: usize) -> MultiGraph {
        generate(&GeneratorSpec::new(Family::PathMultigraph { l: n, k: 1 }, 0)).unwrap()
    }

    fn mono(m: usize) -> PartialColoring {
        PartialColoring::from_assignment(vec![Some(0); m])
    }

    #[test]
    fn long_path_gets_short_trees() {
        let g = path(200);
        let eps = Epsilon::new(0.5).unwrap();
        for seed in 0..10 {
            let split = reduce_forest_diameter(&g, &mono(199), 1, eps, &RandomStream::new(seed), &mut RoundLedger::new()).unwrap();
            let bound = (DIAMETER_FACTOR * 8.0 / 0.5) as usize;
            assert!(max_color_diameter(&g, &split.kept).unwrap() <= bound);
            assert!(max_color_diameter(&g, &split.moved).unwrap() <= bound);
            assert!(split.moved_colors() <= 1);
            for e in g.edge_ids() {
                assert!(split.kept.get(e).is_some() != split.moved.get(e).is_some());
            }
        }
    }

    #[test]
    fn empty_and_star_inputs() {
        let g = path(5);
        let empty = PartialColoring::new(4);
        let split = reduce_forest_diameter(&g, &empty, 1, Epsilon::new(0.5).unwrap(), &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert_eq!(split.kept, empty);
        assert_eq!(split.moved.colored_count(), 0);
        let star = MultiGraph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        let split = reduce_forest_diameter(&star, &mono(5), 1, Epsilon::new(0.5).unwrap(), &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert!(split.long_tree.is_empty());
    }

    #[test]
    fn threshold_cut_is_exact() {
        let g = path(12);
        let classes = BTreeMap::from([(0, (0..11).collect::<Vec<_>>())]);
        let cut = cut_long_trees(&g, &classes, 7);
        let mut rest = mono(11);
        for &e in &cut {
            rest.clear(e);
        }
        assert!(max_color_diameter(&g, &rest).unwrap() < 7);
    }

    #[test]
    fn shorten_path_to_blocks() {
        let g = path(400);
        let eps = Epsilon::new(0.5).unwrap();
        let a = 18;
        let short = shorten_to_inv_eps(&g, &mono(399), 1.0, a, eps, &RandomStream::new(2), &mut RoundLedger::new()).unwrap();
        assert_eq!(short.block, 80);
        assert!(max_color_diameter(&g, &short.coloring).unwrap() <= 4 * short.block);
        assert!(check_forest_decomposition(&g, &short.coloring, None).ok);
        let (sub, _) = g.edge_subgraph(&short.removed);
        let o = Orientation::from_tails(&sub, &short.tails);
        assert!(check_orientation(&sub, &o, ceil_tol(0.5 * a as f64), false).ok);
        let star = MultiGraph::from_edges(6, (1..6).map(|i| (0, i))).unwrap();
        let s = shorten_to_inv_eps(&star, &mono(5), 1.0, 18, eps, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert!(s.removed.is_empty());
        assert!(shorten_to_inv_eps(&g, &mono(399), 1.0, 1, eps, &RandomStream::new(0), &mut RoundLedger::new()).is_err());
    }
}
