//! Greedy list decompositions along low-outdegree acyclic orientations.

use crate::coloring::{Color, PaletteSet, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{degeneracy, EdgeId, MultiGraph, Orientation, Vertex};
use crate::netdecomp::network_decomposition;
use crate::params::{floor_tol, Epsilon};
use crate::runtime::{RandomStream, RoundLedger};

use super::hpartition::{acyclic_orientation, h_partition, orientation_from_partition, resolve_a_star};

/// Each vertex gives its out-edges distinct colors from their palettes. With
/// an acyclic orientation every color class is a forest. Every palette must
/// be at least as long as the outdegree of its edge's tail.
pub fn greedy_along(g: &MultiGraph, orientation: &Orientation, palettes: &PaletteSet) -> Result<PartialColoring> {
    let mut coloring = PartialColoring::new(g.edge_count());
    let out = orientation.out_edges(g);
    for edges in &out {
        if let Some(&e) = edges.iter().find(|&&e| palettes.palette(e).len() < edges.len()) {
            return Err(Error::PaletteTooSmall { edge: e, size: palettes.palette(e).len(), needed: edges.len() });
        }
    }
    for edges in out {
        let mut used: Vec<Color> = Vec::with_capacity(edges.len());
        for e in edges {
            let c = palettes
                .palette(e)
                .iter()
                .copied()
                .find(|c| !used.contains(c))
                .ok_or(Error::PaletteTooSmall { edge: e, size: palettes.palette(e).len(), needed: used.len() + 1 })?;
            used.push(c);
            coloring.set(e, c);
        }
    }
    Ok(coloring)
}

/// A `t`-LFD with `t = floor((2 + eps) a*)`. Palettes of size `t` always
/// suffice.
pub fn greedy_lfd(
    g: &MultiGraph,
    eps: Epsilon,
    a_star: Option<usize>,
    palettes: &PaletteSet,
    ledger: &mut RoundLedger,
) -> Result<PartialColoring> {
    let (orientation, _) = acyclic_orientation(g, eps, a_star, ledger)?;
    ledger.charge("greedy-lfd/choose", 1, 1);
    greedy_along(g, &orientation, palettes)
}

/// Picks, for edge `e` leaving `tail`, the first palette color not on any
/// out-edge of either endpoint nor in `extra`.
fn first_free(
    e: EdgeId,
    endpoints: [Vertex; 2],
    out: &[Vec<EdgeId>],
    coloring: &PartialColoring,
    extra: &[Color],
    palettes: &PaletteSet,
) -> Result<Color> {
    let mut banned: Vec<Color> = extra.to_vec();
    for x in endpoints {
        banned.extend(out[x].iter().filter(|&&f| f != e).filter_map(|&f| coloring.get(f)));
    }
    palettes
        .palette(e)
        .iter()
        .copied()
        .find(|c| !banned.contains(c))
        .ok_or(Error::PaletteTooSmall { edge: e, size: palettes.palette(e).len(), needed: banned.len() + 1 })
}

/// A `2d`-LSFD for degeneracy `d`. Vertices are handled in reverse
/// elimination order; each out-edge avoids the colors on out-edges of both
/// its endpoints, so every color class is a star forest.
pub fn degeneracy_lsfd(g: &MultiGraph, palettes: &PaletteSet, ledger: &mut RoundLedger) -> Result<PartialColoring> {
    let deg = degeneracy(g);
    palettes.require_size(2 * deg.value)?;
    let mut rank = vec![0; g.vertex_count()];
    for (i, &v) in deg.order.iter().enumerate() {
        rank[v] = i;
    }
    let tails: Vec<Vertex> = g.edges().iter().map(|&(u, v)| if rank[u] < rank[v] { u } else { v }).collect();
    let orientation = Orientation::from_tails(g, &tails);
    let out = orientation.out_edges(g);
    let mut coloring = PartialColoring::new(g.edge_count());
    for &v in deg.order.iter().rev() {
        for &e in &out[v] {
            let c = first_free(e, [v, orientation.head(g, e)], &out, &coloring, &[], palettes)?;
            coloring.set(e, c);
        }
    }
    ledger.charge("degeneracy-lsfd/sequential", 1, g.vertex_count().max(1) as u64);
    Ok(coloring)
}

/// A `floor((4 + eps) a*)`-LSFD. Peeling with `eps/10` gives classes
/// `H_k..H_1`; the edges whose lower class is `H_j` are colored greedily
/// inside the clusters of a decomposition of `G^3`, one cluster class at a
/// time.
pub fn lsfd_4eps(
    g: &MultiGraph,
    eps: Epsilon,
    a_star: Option<usize>,
    palettes: &PaletteSet,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<PartialColoring> {
    let a_star = resolve_a_star(g, a_star);
    palettes.require_size(floor_tol((4.0 + eps.get()) * a_star as f64))?;
    let mut coloring = PartialColoring::new(g.edge_count());
    if g.edge_count() == 0 {
        return Ok(coloring);
    }
    let hp = h_partition(g, eps.scaled(10.0), Some(a_star), ledger)?;
    let orientation = orientation_from_partition(g, &hp);
    let out = orientation.out_edges(g);
    let nd = network_decomposition(g, 3, &stream.derive("lsfd-nd", 0), ledger)?;
    let mut layer_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); hp.classes];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        layer_edges[hp.class_of[u].min(hp.class_of[v])].push(e);
    }
    for j in (0..hp.classes).rev() {
        let in_layer = |x: Vertex| hp.class_of[x] == j;
        for class in 0..nd.chi {
            for &e in &layer_edges[j] {
                let tail = orientation.tail(g, e);
                if nd.class_of[tail] != class {
                    continue;
                }
                let head = orientation.head(g, e);
                let mut extra = Vec::new();
                for x in [tail, head] {
                    if in_layer(x) {
                        extra.extend(
                            g.incident(x)
                                .iter()
                                .filter(|&&f| f != e && hp.class_of[g.other(f, x)] >= j)
                                .filter_map(|&f| coloring.get(f)),
                        );
                    }
                }
                let c = first_free(e, [tail, head], &out, &coloring, &extra, palettes)?;
                coloring.set(e, c);
            }
            ledger.charge("lsfd/cluster-greedy", (nd.weak_diameter() + 3) as u64, 1);
        }
    }
    Ok(coloring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family, GeneratorSpec};
    use crate::verify::{check_forest_decomposition, check_star_forest};

    fn eps(x: f64) -> Epsilon {
        Epsilon::new(x).unwrap()
    }

    fn tri() -> MultiGraph {
        MultiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn lists(m: usize, colors: &[Color]) -> PaletteSet {
        PaletteSet::from_lists(vec![colors.to_vec(); m]).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let p = lists(3, &[1, 2]);
        let c = greedy_lfd(&tri(), eps(0.5), None, &p, &mut RoundLedger::new()).unwrap();
        assert!(check_forest_decomposition(&tri(), &c, Some(&p)).ok);
        assert!(c.is_total());
        let edge = MultiGraph::from_edges(2, [(0, 1)]).unwrap();
        let c = greedy_lfd(&edge, eps(0.5), None, &lists(1, &[7]), &mut RoundLedger::new()).unwrap();
        assert_eq!(c.get(0), Some(7));
        let star = MultiGraph::from_edges(5, (1..5).map(|i| (0, i))).unwrap();
        let p = lists(4, &[1, 2]);
        let c = greedy_lfd(&star, eps(0.5), None, &p, &mut RoundLedger::new()).unwrap();
        assert!(check_forest_decomposition(&star, &c, Some(&p)).ok);
        assert!(matches!(
            greedy_lfd(&tri(), eps(0.5), None, &lists(3, &[1]), &mut RoundLedger::new()),
            Err(Error::PaletteTooSmall { needed: 2, .. })
        ));
    }

    #[test]
    fn degeneracy_examples() {
        let tree = MultiGraph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let p = lists(4, &[3, 9]);
        let c = degeneracy_lsfd(&tree, &p, &mut RoundLedger::new()).unwrap();
        assert!(check_star_forest(&tree, &c).ok && check_forest_decomposition(&tree, &c, Some(&p)).ok);
        let k4 = MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let p = lists(6, &[1, 2, 3, 4, 5, 6]);
        let c = degeneracy_lsfd(&k4, &p, &mut RoundLedger::new()).unwrap();
        assert!(check_star_forest(&k4, &c).ok && c.is_total());
        let edge = MultiGraph::from_edges(2, [(0, 1)]).unwrap();
        let c = degeneracy_lsfd(&edge, &lists(1, &[1, 2]), &mut RoundLedger::new()).unwrap();
        assert!(matches!(c.get(0), Some(1) | Some(2)));
    }

    #[test]
    fn lsfd_4eps_examples() {
        let triple = MultiGraph::from_edges(2, [(0, 1); 3]).unwrap();
        let p = lists(3, &[1, 2, 3, 4, 5, 6, 7, 8]);
        let c = lsfd_4eps(&triple, eps(0.1), None, &p, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert!(check_star_forest(&triple, &c).ok && check_forest_decomposition(&triple, &c, Some(&p)).ok);
        let g = generate(&GeneratorSpec::new(Family::RandomForestUnion { n: 200, k: 2 }, 4)).unwrap();
        let a_star = crate::graph::pseudo_arboricity(&g).0.value;
        let size = floor_tol(4.5 * a_star as f64);
        let palettes = PaletteSet::from_lists(
            (0..g.edge_count()).map(|e| (0..size as Color).map(|c| c + (e % 3) as Color).collect()).collect(),
        )
        .unwrap();
        let c = lsfd_4eps(&g, eps(0.5), Some(a_star), &palettes, &RandomStream::new(1), &mut RoundLedger::new()).unwrap();
        assert!(c.is_total());
        assert!(check_star_forest(&g, &c).ok);
        assert!(check_forest_decomposition(&g, &c, Some(&palettes)).ok);
    }
}
