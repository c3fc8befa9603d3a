//! Per-vertex bipartite graphs between colors and out-neighbors, and the
//! coloring read off their matchings.

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, PaletteSet, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Orientation, Vertex};
use crate::matching::{max_bipartite_matching, Matching};

/// `leaf_colors[v]` is `C_v`, sorted: `v` is a `c`-leaf for these colors and
/// a `c`-center for every other color of the universe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterAssignment {
    pub universe: usize,
    pub leaf_colors: Vec<Vec<Color>>,
}

impl CenterAssignment {
    /// Every vertex is a center for every color.
    pub fn all_centers(n: usize, universe: usize) -> Self {
        Self { universe, leaf_colors: vec![Vec::new(); n] }
    }

    pub fn is_leaf(&self, v: Vertex, c: Color) -> bool {
        self.leaf_colors[v].binary_search(&c).is_ok()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.leaf_colors).expect("color lists serialize")
    }
}

/// Left nodes are the colors `0..universe`; right nodes are the out-edges of
/// the vertex ordered by neighbor, padded with dummies (`None`) up to `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalBipartite {
    pub vertex: Vertex,
    pub right: Vec<Option<(Vertex, EdgeId)>>,
    /// Right nodes adjacent to each color.
    pub adj: Vec<Vec<usize>>,
}

impl LocalBipartite {
    pub fn real_count(&self) -> usize {
        self.right.iter().flatten().count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn matching(&self) -> Matching {
        max_bipartite_matching(&self.adj, self.right.len())
    }

    /// Real out-edges left unmatched by a maximum matching.
    pub fn deficit(&self) -> usize {
        self.real_count() - self.matching().size()
    }
}

/// Out-edges of `v`, ordered by neighbor and then edge id.
pub(crate) fn sorted_out_edges(g: &MultiGraph, orientation: &Orientation, v: Vertex) -> Vec<(Vertex, EdgeId)> {
    let mut out: Vec<(Vertex, EdgeId)> = g
        .incident(v)
        .iter()
        .filter(|&&e| orientation.tail(g, e) == v)
        .map(|&e| (orientation.head(g, e), e))
        .collect();
    out.sort_unstable();
    out
}

/// `H_v`: color `c` is joined to out-neighbor `u` exactly when `v` is a
/// `c`-leaf, `u` is a `c`-center and `c` is in the palette of `uv`.
pub fn build_hv(
    g: &MultiGraph,
    orientation: &Orientation,
    centers: &CenterAssignment,
    palettes: &PaletteSet,
    t: usize,
    v: Vertex,
) -> Result<LocalBipartite> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let out = sorted_out_edges(g, orientation, v);
    if out.len() > t {
        return Err(Error::Precondition(format!("vertex {v} has outdegree {} above {t}", out.len())));
    }
    Ok(local_graph(out, centers, palettes, t, v))
}

pub(crate) fn local_graph(
    out: Vec<(Vertex, EdgeId)>,
    centers: &CenterAssignment,
    palettes: &PaletteSet,
    t: usize,
    v: Vertex,
) -> LocalBipartite {
    let mut adj = vec![Vec::new(); centers.universe];
    for &c in &centers.leaf_colors[v] {
        for (i, &(u, e)) in out.iter().enumerate() {
            if !centers.is_leaf(u, c) && palettes.contains(e, c) {
                adj[c as usize].push(i);
            }
        }
    }
    let mut right: Vec<Option<(Vertex, EdgeId)>> = out.into_iter().map(Some).collect();
    right.resize(t, None);
    LocalBipartite { vertex: v, right, adj }
}

/// The coloring read off the matchings and the unmatched out-edges, which
/// form the leftover with at most `deficit[v]` out-edges at every `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingSplit {
    pub coloring: PartialColoring,
    pub leftover: Vec<EdgeId>,
    /// Tail of each leftover edge, aligned with `leftover`.
    pub leftover_tails: Vec<Vertex>,
    pub deficit: Vec<usize>,
}

impl MatchingSplit {
    pub fn max_deficit(&self) -> usize {
        self.deficit.iter().copied().max().unwrap_or(0)
    }
}

/// Colors `vu` with `c` for every matched pair `(c, u)` of `H_v`. Fails when
/// some vertex leaves more than `allowed` real out-edges unmatched.
pub fn sfd_from_matchings(g: &MultiGraph, graphs: &[LocalBipartite], allowed: usize) -> Result<MatchingSplit> {
    let mut split = MatchingSplit {
        coloring: PartialColoring::new(g.edge_count()),
        leftover: Vec::new(),
        leftover_tails: Vec::new(),
        deficit: vec![0; g.vertex_count()],
    };
    for hv in graphs {
        let matching = hv.matching();
        for (r, slot) in hv.right.iter().enumerate() {
            let Some((_, e)) = *slot else { continue };
            match matching.right[r] {
                Some(c) => split.coloring.set(e, c as Color),
                None => {
                    split.leftover.push(e);
                    split.leftover_tails.push(hv.vertex);
                    split.deficit[hv.vertex] += 1;
                }
            }
        }
        if split.deficit[hv.vertex] > allowed {
            return Err(Error::DeficitExceeded { vertex: hv.vertex, deficit: split.deficit[hv.vertex], allowed });
        }
    }
    Ok(split)
}
