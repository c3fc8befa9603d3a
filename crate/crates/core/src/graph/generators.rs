//! Seeded test-graph families, including the two-path lower-bound gadgets.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MultiGraph;
use crate::error::{Error, Result};
use crate::runtime::RandomStream;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    /// `l` vertices in a line, `k` parallel edges between neighbors.
    #[serde(rename = "path_multigraph")]
    PathMultigraph { l: usize, k: usize },
    /// Two `a`-fold paths with `t` inner vertices each, their ends joined by
    /// `floor(a/2)` parallel edges.
    #[serde(rename = "lower_bound_G")]
    LowerBoundG { a: usize, t: usize },
    /// [`Family::LowerBoundG`] with both joined end pairs merged.
    #[serde(rename = "lower_bound_G_prime")]
    LowerBoundGPrime { a: usize, t: usize },
    /// The `a = 2` gadget made simple: every doubled edge `uw` becomes a
    /// K4 on `u`, `w` and two fresh vertices.
    #[serde(rename = "k4_expanded")]
    K4Expanded { t: usize },
    /// Union of `k` uniformly random labeled spanning trees on `n` vertices.
    #[serde(rename = "random_forest_union")]
    RandomForestUnion { n: usize, k: usize },
    #[serde(rename = "gnp")]
    Gnp { n: usize, p: f64 },
    /// Vertex 0 joined to `leaves` other vertices.
    #[serde(rename = "star")]
    Star { leaves: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        Self { family, seed }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn add_bundle(g: &mut MultiGraph, u: usize, v: usize, copies: usize) {
    for _ in 0..copies {
        g.add_edge(u, v).expect("generator edges are valid");
    }
}

/// Vertex ids: `x1 = 0`, `x2 = 1`, `y1 = 2`, `y2 = 3`, then the inner
/// vertices of the first path and of the second path.
fn two_paths(a: usize, t: usize, contract: bool) -> MultiGraph {
    let (x1, x2, y1, y2, base) = if contract { (0, 0, 1, 1, 2) } else { (0, 1, 2, 3, 4) };
    let mut g = MultiGraph::new(base + 2 * t);
    if !contract {
        add_bundle(&mut g, x1, x2, a / 2);
        add_bundle(&mut g, y1, y2, a / 2);
    }
    for (start, end, offset) in [(x1, y1, base), (x2, y2, base + t)] {
        let line: Vec<usize> = std::iter::once(start).chain(offset..offset + t).chain([end]).collect();
        for w in line.windows(2) {
            add_bundle(&mut g, w[0], w[1], a);
        }
    }
    g
}

fn k4_expanded(t: usize) -> MultiGraph {
    let base = two_paths(2, t, false);
    let mut g = MultiGraph::new(base.vertex_count());
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < base.edge_count() {
        let (u, v) = base.endpoints(i);
        if i + 1 < base.edge_count() && base.endpoints(i + 1) == (u, v) {
            edges.push((u, v));
            i += 2;
        } else {
            g.add_edge(u, v).expect("valid edge");
            i += 1;
        }
    }
    let mut h = MultiGraph::new(g.vertex_count() + 2 * edges.len());
    for &(u, v) in g.edges() {
        h.add_edge(u, v).expect("valid edge");
    }
    for (j, &(u, v)) in edges.iter().enumerate() {
        let p = g.vertex_count() + 2 * j;
        let q = p + 1;
        for (x, y) in [(u, v), (u, p), (u, q), (v, p), (v, q), (p, q)] {
            h.add_edge(x, y).expect("valid edge");
        }
    }
    h
}

/// Decodes a Prüfer sequence into the edges of a labeled tree.
fn prufer_tree(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut leaves: std::collections::BinaryHeap<std::cmp::Reverse<usize>> =
        (0..n).filter(|&v| degree[v] == 1).map(std::cmp::Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let std::cmp::Reverse(leaf) = leaves.pop().expect("a leaf exists");
        edges.push((leaf.min(x), leaf.max(x)));
        degree[x] -= 1;
        if degree[x] == 1 {
            leaves.push(std::cmp::Reverse(x));
        }
    }
    let std::cmp::Reverse(u) = leaves.pop().expect("two leaves remain");
    let std::cmp::Reverse(v) = leaves.pop().expect("two leaves remain");
    edges.push((u.min(v), u.max(v)));
    edges
}

pub fn generate(spec: &GeneratorSpec) -> Result<MultiGraph> {
    let mut rng = RandomStream::new(spec.seed).derive("generate", 0).rng();
    let g = match spec.family {
        Family::PathMultigraph { l, k } => {
            if l == 0 {
                return Err(bad("path_multigraph needs l >= 1"));
            }
            let mut g = MultiGraph::new(l);
            for i in 1..l {
                add_bundle(&mut g, i - 1, i, k);
            }
            g
        }
        Family::LowerBoundG { a, t } | Family::LowerBoundGPrime { a, t } => {
            if a < 2 || t < 1 {
                return Err(bad("lower-bound gadgets need a >= 2 and t >= 1"));
            }
            two_paths(a, t, matches!(spec.family, Family::LowerBoundGPrime { .. }))
        }
        Family::K4Expanded { t } => {
            if t < 1 {
                return Err(bad("k4_expanded needs t >= 1"));
            }
            k4_expanded(t)
        }
        Family::RandomForestUnion { n, k } => {
            if n == 0 {
                return Err(bad("random_forest_union needs n >= 1"));
            }
            let mut g = MultiGraph::new(n);
            if n >= 2 {
                for _ in 0..k {
                    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
                    for (u, v) in prufer_tree(&seq, n) {
                        g.add_edge(u, v)?;
                    }
                }
            }
            g
        }
        Family::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(bad("gnp needs p in [0, 1]"));
            }
            let mut g = MultiGraph::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        g.add_edge(u, v)?;
                    }
                }
            }
            g
        }
        Family::Star { leaves } => MultiGraph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i)))?,
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::nash_williams_arboricity;

    fn gen(family: Family, seed: u64) -> MultiGraph {
        generate(&GeneratorSpec::new(family, seed)).unwrap()
    }

    #[test]
    fn path_multigraph_shapes() {
        let g = gen(Family::PathMultigraph { l: 2, k: 1 }, 0);
        assert_eq!(g.edges(), &[(0, 1)]);
        let g = gen(Family::PathMultigraph { l: 5, k: 3 }, 0);
        assert_eq!(g.edge_count(), 12);
        assert_eq!(g.max_degree(), 6);
        assert_eq!(nash_williams_arboricity(&g).unwrap().value, 3);
    }

    #[test]
    fn lower_bound_gadget() {
        let g = gen(Family::LowerBoundG { a: 4, t: 3 }, 0);
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 2 * 2 + 2 * 4 * 4);
        assert_eq!(nash_williams_arboricity(&g).unwrap().value, 4);
        let h = gen(Family::LowerBoundGPrime { a: 4, t: 3 }, 0);
        assert_eq!(h.vertex_count(), 8);
        assert_eq!(h.edge_count(), 2 * 4 * 4);
        assert!(generate(&GeneratorSpec::new(Family::LowerBoundG { a: 1, t: 3 }, 0)).is_err());
    }

    #[test]
    fn k4_expansion_is_simple() {
        let g = gen(Family::K4Expanded { t: 1 }, 0);
        assert!(g.is_simple());
        assert_eq!(g.vertex_count(), 14);
        assert_eq!(nash_williams_arboricity(&g).unwrap().value, 2);
    }

    #[test]
    fn forest_union_is_seeded() {
        let f = Family::RandomForestUnion { n: 30, k: 3 };
        let g = gen(f.clone(), 7);
        assert_eq!(g.edge_count(), 3 * 29);
        assert_eq!(g, gen(f.clone(), 7));
        assert_ne!(g, gen(f, 8));
    }

    #[test]
    fn spec_json_shape() {
        let spec = GeneratorSpec::new(Family::Gnp { n: 5, p: 0.5 }, 3);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"family":"gnp","n":5,"p":0.5,"seed":3}"#);
        assert_eq!(serde_json::from_str::<GeneratorSpec>(&text).unwrap(), spec);
    }
}
