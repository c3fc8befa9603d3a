//! Star-forest decomposition from an acyclic orientation: label each vertex's
//! out-edges, 3-color every labeled forest, and color an edge by its label
//! and its head's vertex color.

use crate::coloring::{Color, PartialColoring};
use crate::error::Result;
use crate::graph::{MultiGraph, Orientation, Vertex};
use crate::params::Epsilon;
use crate::runtime::RoundLedger;

use super::hpartition::acyclic_orientation;

/// Proper 3-coloring of a rooted forest given by parent pointers. Returns the
/// colors and the number of bit-reduction rounds used.
pub fn three_color_forest(parent: &[Option<Vertex>]) -> (Vec<u8>, usize) {
    let n = parent.len();
    let mut color: Vec<u64> = (0..n as u64).collect();
    let mut rounds = 0;
    while color.iter().any(|&c| c >= 6) {
        color = (0..n)
            .map(|v| {
                let k = match parent[v] {
                    Some(p) => (color[v] ^ color[p]).trailing_zeros() as u64,
                    None => 0,
                };
                2 * k + (color[v] >> k & 1)
            })
            .collect();
        rounds += 1;
    }
    let mut children: Vec<Vec<Vertex>> = vec![Vec::new(); n];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(v);
        }
    }
    for high in [5, 4, 3] {
        color = (0..n)
            .map(|v| match parent[v] {
                Some(p) => color[p],
                None => (0..3).find(|&c| c != color[v]).expect("three candidates"),
            })
            .collect();
        let snapshot = color.clone();
        for v in 0..n {
            if snapshot[v] == high {
                let mut banned = children[v].iter().map(|&w| snapshot[w]).collect::<Vec<_>>();
                banned.extend(parent[v].map(|p| snapshot[p]));
                color[v] = (0..3).find(|c| !banned.contains(c)).expect("at most two neighbor colors");
            }
        }
    }
    (color.into_iter().map(|c| c as u8).collect(), rounds)
}

/// `3 * max_outdegree` star forests from an acyclic orientation. Colors are
/// shifted by `offset`.
pub fn star_forest_from_orientation(
    g: &MultiGraph,
    orientation: &Orientation,
    offset: Color,
    ledger: &mut RoundLedger,
) -> PartialColoring {
    let out = orientation.out_edges(g);
    let labels = out.iter().map(Vec::len).max().unwrap_or(0);
    let mut coloring = PartialColoring::new(g.edge_count());
    let mut rounds = 0;
    for label in 0..labels {
        let parent: Vec<Option<Vertex>> =
            out.iter().map(|edges| edges.get(label).map(|&e| orientation.head(g, e))).collect();
        let (vertex_color, used) = three_color_forest(&parent);
        rounds = rounds.max(used);
        for edges in &out {
            if let Some(&e) = edges.get(label) {
                let head = orientation.head(g, e);
                coloring.set(e, offset + 3 * label as Color + Color::from(vertex_color[head]));
            }
        }
    }
    ledger.charge("star3t/cole-vishkin", 1, rounds.max(1) as u64);
    ledger.charge("star3t/shift-down", 1, 6);
    coloring
}

/// A `3t`-star-forest decomposition with `t = floor((2 + eps) a*)`.
pub fn star_forest_3t(
    g: &MultiGraph,
    eps: Epsilon,
    a_star: Option<usize>,
    ledger: &mut RoundLedger,
) -> Result<PartialColoring> {
    let (orientation, _) = acyclic_orientation(g, eps, a_star, ledger)?;
    Ok(star_forest_from_orientation(g, &orientation, 0, ledger))
}
