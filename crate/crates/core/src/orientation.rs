//! Low-outdegree orientation by reversing short directed paths inside the
//! clusters of a network decomposition.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pseudo_arboricity_with_loops, EdgeId, MultiGraph, Orientation, Vertex};
use crate::netdecomp::{network_decomposition, NdConfig};
use crate::params::{ceil_tol, log2_ceil, Epsilon};
use crate::runtime::{RandomStream, RoundLedger};

/// Radius multiplier: clusters read `ceil(K ceil(log2 n) / eps)` hops.
pub const RADIUS_FACTOR: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoadThreshold {
    pub a_star_bound: usize,
    pub eps: Epsilon,
    /// `ceil(a_star_bound * (1 + eps))`.
    pub threshold: usize,
}

impl LoadThreshold {
    pub fn new(a_star_bound: usize, eps: Epsilon) -> Self {
        Self { a_star_bound, eps, threshold: ceil_tol(a_star_bound as f64 * (1.0 + eps.get())) }
    }

    pub fn overloaded(&self, outdeg: usize) -> bool {
        outdeg > self.threshold
    }

    /// Strictly below `a_star_bound * (1 + eps)`, so it can absorb one edge.
    pub fn is_sink(&self, outdeg: usize) -> bool {
        outdeg < self.threshold
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReversalPath {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

/// Mutable orientation with out-edge sets and loop-inclusive outdegrees.
struct Loads<'g> {
    g: &'g MultiGraph,
    orientation: Orientation,
    out: Vec<BTreeSet<EdgeId>>,
    outdeg: Vec<usize>,
}

impl<'g> Loads<'g> {
    fn new(g: &'g MultiGraph, orientation: Orientation, loops: &[usize]) -> Self {
        let out: Vec<BTreeSet<EdgeId>> = orientation.out_edges(g).into_iter().map(|v| v.into_iter().collect()).collect();
        let outdeg = out.iter().zip(loops).map(|(s, &l)| s.len() + l).collect();
        Self { g, orientation, out, outdeg }
    }

    fn find_path(&self, v: Vertex, th: &LoadThreshold) -> Result<ReversalPath> {
        let n = self.g.vertex_count();
        let mut via: Vec<Option<EdgeId>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[v] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &e in &self.out[x] {
                let y = self.orientation.head(self.g, e);
                if seen[y] {
                    continue;
                }
                seen[y] = true;
                via[y] = Some(e);
                if th.is_sink(self.outdeg[y]) {
                    let mut vertices = vec![y];
                    let mut edges = Vec::new();
                    let mut z = y;
                    while let Some(f) = via[z] {
                        edges.push(f);
                        z = self.g.other(f, z);
                        vertices.push(z);
                    }
                    vertices.reverse();
                    edges.reverse();
                    return Ok(ReversalPath { vertices, edges });
                }
                queue.push_back(y);
            }
        }
        Err(Error::NoSink { vertex: v })
    }

    fn reverse(&mut self, path: &ReversalPath) {
        for &e in &path.edges {
            let tail = self.orientation.tail(self.g, e);
            let head = self.orientation.head(self.g, e);
            self.out[tail].remove(&e);
            self.out[head].insert(e);
            self.orientation.reverse(e);
        }
        let first = path.vertices[0];
        let last = *path.vertices.last().expect("nonempty path");
        self.outdeg[first] -= 1;
        self.outdeg[last] += 1;
    }

    /// Relieves every overloaded vertex of `members`, in ascending order.
    /// Returns the number of reversals and the longest path used.
    fn patch(&mut self, members: &[Vertex], th: &LoadThreshold) -> Result<(usize, usize)> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        let (mut reversals, mut longest) = (0, 0);
        for v in sorted {
            while th.overloaded(self.outdeg[v]) {
                let path = self.find_path(v, th)?;
                longest = longest.max(path.edges.len());
                self.reverse(&path);
                reversals += 1;
            }
        }
        Ok((reversals, longest))
    }
}

/// Breadth-first search along out-edges from `v` to the nearest vertex that
/// can take one more out-edge.
pub fn find_reversal_path(g: &MultiGraph, initial: &Orientation, v: Vertex, th: &LoadThreshold) -> Result<ReversalPath> {
    Loads::new(g, initial.clone(), &vec![0; g.vertex_count()]).find_path(v, th)
}

/// Reverses paths until no vertex of `members` is overloaded. Vertices that
/// were not overloaded stay that way.
pub fn patch_orientation(
    g: &MultiGraph,
    initial: &Orientation,
    members: &[Vertex],
    th: &LoadThreshold,
    ledger: &mut RoundLedger,
) -> Result<Orientation> {
    let mut loads = Loads::new(g, initial.clone(), &vec![0; g.vertex_count()]);
    let (_, longest) = loads.patch(members, th)?;
    ledger.charge("patch/read", longest as u64, 1);
    Ok(loads.orientation)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientationRun {
    pub orientation: Orientation,
    pub threshold: LoadThreshold,
    pub reversals: usize,
    pub longest_path: usize,
    pub radius: usize,
}

pub fn low_outdegree_orientation(
    g: &MultiGraph,
    eps: Epsilon,
    a_star: Option<usize>,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<OrientationRun> {
    low_outdegree_orientation_with_loops(g, &vec![0; g.vertex_count()], eps, a_star, stream, ledger)
}

/// Orientation of outdegree at most `ceil(a* (1 + eps))`, where `loops[v]`
/// loops at `v` count toward its outdegree and never move. Starts from
/// every edge pointing to its higher endpoint, then patches the clusters of
/// a decomposition of `G^{2R}` class by class.
pub fn low_outdegree_orientation_with_loops(
    g: &MultiGraph,
    loops: &[usize],
    eps: Epsilon,
    a_star: Option<usize>,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<OrientationRun> {
    let n = g.vertex_count();
    let a_star = a_star.unwrap_or_else(|| pseudo_arboricity_with_loops(g, loops).0.value);
    let threshold = LoadThreshold::new(a_star, eps);
    let radius = ceil_tol(RADIUS_FACTOR * log2_ceil(n) as f64 / eps.get());
    let mut loads = Loads::new(g, Orientation::toward_higher(g), loops);
    let mut run = OrientationRun {
        orientation: Orientation::from_flags(Vec::new()),
        threshold,
        reversals: 0,
        longest_path: 0,
        radius,
    };
    if g.edge_count() > 0 {
        let nd = network_decomposition(g, 2 * radius, &stream.derive("orient-nd", 0), ledger)?;
        let config = NdConfig::default();
        let class_rounds = radius + 2 * radius * config.diameter_cap(n);
        ledger.charge("orient/patch-classes", class_rounds as u64, config.class_cap(n) as u64);
        let clusters = nd.clusters();
        for class in nd.clusters_by_class() {
            for c in class {
                let (reversals, longest) = loads.patch(&clusters[c], &threshold)?;
                run.reversals += reversals;
                run.longest_path = run.longest_path.max(longest);
            }
        }
    }
    run.orientation = loads.orientation;
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, pseudo_arboricity, Family, GeneratorSpec};
    use crate::verify::check_orientation;

    fn eps(x: f64) -> Epsilon {
        Epsilon::new(x).unwrap()
    }

    #[test]
    fn threshold_rounding() {
        let th = LoadThreshold::new(3, eps(1.0 / 3.0));
        assert_eq!(th.threshold, 4);
        assert!(th.overloaded(5) && !th.overloaded(4));
        assert!(th.is_sink(3) && !th.is_sink(4));
        assert_eq!(LoadThreshold::new(1, eps(0.5)).threshold, 2);
    }

    #[test]
    fn paths_to_sinks() {
        let g = MultiGraph::from_edges(3, [(0, 1), (0, 1), (0, 1), (0, 2)]).unwrap();
        let initial = Orientation::from_tails(&g, &[0, 0, 0, 0]);
        let th = LoadThreshold::new(1, eps(0.5));
        let path = find_reversal_path(&g, &initial, 0, &th).unwrap();
        assert_eq!(path.vertices, vec![0, 1]);
        let chain = MultiGraph::from_edges(3, [(0, 1), (1, 2), (0, 1), (0, 1), (1, 2)]).unwrap();
        let initial = Orientation::from_tails(&chain, &[0, 1, 0, 0, 1]);
        let path = find_reversal_path(&chain, &initial, 0, &LoadThreshold::new(1, eps(1.0))).unwrap();
        assert_eq!(path.vertices, vec![0, 1, 2]);
        let dense = MultiGraph::from_edges(2, [(0, 1); 5]).unwrap();
        let full = Orientation::from_tails(&dense, &[0, 0, 0, 1, 1]);
        assert!(matches!(
            find_reversal_path(&dense, &full, 0, &LoadThreshold::new(1, eps(0.1))),
            Err(Error::NoSink { vertex: 0 })
        ));
    }

    #[test]
    fn patch_two_vertices() {
        let g = MultiGraph::from_edges(2, [(0, 1); 4]).unwrap();
        let initial = Orientation::from_tails(&g, &[0, 0, 0, 0]);
        let th = LoadThreshold { a_star_bound: 2, eps: eps(0.1), threshold: 2 };
        let out = patch_orientation(&g, &initial, &[0], &th, &mut RoundLedger::new()).unwrap();
        assert_eq!(out.outdegrees(&g), vec![2, 2]);
        let same = patch_orientation(&g, &out, &[0, 1], &th, &mut RoundLedger::new()).unwrap();
        assert_eq!(same, out);
    }

    #[test]
    fn untouched_far_region() {
        let mut edges = vec![(0, 1); 3];
        edges.extend((1..30).map(|i| (i, i + 1)));
        let g = MultiGraph::from_edges(31, edges).unwrap();
        let initial = Orientation::toward_higher(&g);
        let th = LoadThreshold::new(2, eps(0.1));
        let before = initial.clone();
        let after = patch_orientation(&g, &initial, &[0], &th, &mut RoundLedger::new()).unwrap();
        for e in 5..g.edge_count() {
            assert_eq!(before.flags()[e], after.flags()[e]);
        }
    }

    #[test]
    fn algorithm_examples() {
        let tri = MultiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let run = low_outdegree_orientation(&tri, eps(0.5), None, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert!(run.orientation.max_outdegree(&tri) <= 2);
        let six = MultiGraph::from_edges(2, [(0, 1); 6]).unwrap();
        let run = low_outdegree_orientation(&six, eps(1.0 / 3.0), None, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert!(run.orientation.max_outdegree(&six) <= 4);
        let empty = MultiGraph::new(4);
        let run = low_outdegree_orientation(&empty, eps(0.5), None, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert!(run.orientation.is_empty());
        assert_eq!(run.reversals, 0);
    }

    #[test]
    fn loops_count_but_stay() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let run = low_outdegree_orientation_with_loops(&g, &[2, 0], eps(0.5), None, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert_eq!(run.threshold.a_star_bound, 2);
        assert!(run.orientation.outdegrees(&g)[0] + 2 <= run.threshold.threshold);
    }

    #[test]
    fn random_graphs_meet_the_bound() {
        for seed in 0..5 {
            let g = generate(&GeneratorSpec::new(Family::Gnp { n: 120, p: 0.08 }, seed)).unwrap();
            let a_star = pseudo_arboricity(&g).0.value;
            let run = low_outdegree_orientation(&g, eps(0.25), None, &RandomStream::new(seed), &mut RoundLedger::new()).unwrap();
            assert!(check_orientation(&g, &run.orientation, ceil_tol(a_star as f64 * 1.25), false).ok);
        }
    }
}
