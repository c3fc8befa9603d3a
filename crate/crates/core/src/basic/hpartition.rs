//! Degree peeling into H-classes and the induced acyclic orientation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{pseudo_arboricity, MultiGraph, Orientation};
use crate::params::{floor_tol, Epsilon};
use crate::runtime::RoundLedger;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPartition {
    /// Class index per vertex, starting at 0.
    pub class_of: Vec<usize>,
    pub classes: usize,
    /// Degree bound of the peeling.
    pub t: usize,
}

/// `floor((2 + eps) * a_star)`, the peeling degree bound.
pub fn peeling_bound(eps: Epsilon, a_star: usize) -> usize {
    floor_tol((2.0 + eps.get()) * a_star as f64)
}

pub(crate) fn resolve_a_star(g: &MultiGraph, a_star: Option<usize>) -> usize {
    a_star.unwrap_or_else(|| pseudo_arboricity(g).0.value)
}

/// Repeatedly removes every vertex of remaining degree at most `t`. The
/// pseudo-arboricity comes from the flow oracle unless `a_star` is given.
pub fn h_partition(g: &MultiGraph, eps: Epsilon, a_star: Option<usize>, ledger: &mut RoundLedger) -> Result<HPartition> {
    let t = peeling_bound(eps, resolve_a_star(g, a_star));
    peel(g, t, ledger)
}

/// Peeling with an explicit degree bound.
pub fn peel(g: &MultiGraph, t: usize, ledger: &mut RoundLedger) -> Result<HPartition> {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut remaining = n;
    let mut classes = 0;
    while remaining > 0 {
        let layer: Vec<usize> = g.vertices().filter(|&v| class_of[v] == usize::MAX && degree[v] <= t).collect();
        if layer.is_empty() {
            return Err(Error::BoundTooSmall { bound: t, remaining });
        }
        for &v in &layer {
            class_of[v] = classes;
        }
        for &v in &layer {
            for &e in g.incident(v) {
                let w = g.other(e, v);
                if class_of[w] == usize::MAX {
                    degree[w] -= 1;
                }
            }
        }
        remaining -= layer.len();
        classes += 1;
    }
    ledger.charge("h-partition/peel", 1, classes.max(1) as u64);
    Ok(HPartition { class_of, classes, t })
}

/// Orients every edge from the lower class to the higher one, and inside a
/// class from the lower vertex index.
pub fn orientation_from_partition(g: &MultiGraph, hp: &HPartition) -> Orientation {
    let tails: Vec<usize> = g
        .edges()
        .iter()
        .map(|&(u, v)| {
            if (hp.class_of[u], u) < (hp.class_of[v], v) {
                u
            } else {
                v
            }
        })
        .collect();
    Orientation::from_tails(g, &tails)
}

/// Acyclic orientation of outdegree at most `floor((2 + eps) a*)`.
pub fn acyclic_orientation(
    g: &MultiGraph,
    eps: Epsilon,
    a_star: Option<usize>,
    ledger: &mut RoundLedger,
) -> Result<(Orientation, HPartition)> {
    let hp = h_partition(g, eps, a_star, ledger)?;
    ledger.charge("h-partition/orient", 1, 1);
    Ok((orientation_from_partition(g, &hp), hp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_orientation;

    fn eps(x: f64) -> Epsilon {
        Epsilon::new(x).unwrap()
    }

    #[test]
    fn star_peels_in_two_rounds() {
        let star = MultiGraph::from_edges(9, (1..9).map(|i| (0, i))).unwrap();
        let mut ledger = RoundLedger::new();
        let hp = h_partition(&star, eps(0.5), None, &mut ledger).unwrap();
        assert_eq!(hp.t, 2);
        assert_eq!(hp.classes, 2);
        assert_eq!(hp.class_of[0], 1);
        assert!(hp.class_of[1..].iter().all(|&c| c == 0));
        assert_eq!(ledger.total_rounds(), 2);
        let (o, _) = acyclic_orientation(&star, eps(0.5), None, &mut RoundLedger::new()).unwrap();
        assert_eq!(o.outdegrees(&star)[0], 0);
        assert!((1..9).all(|v| o.outdegrees(&star)[v] == 1));
    }

    #[test]
    fn small_cases() {
        let edge = MultiGraph::from_edges(2, [(1, 0)]).unwrap();
        let hp = h_partition(&edge, eps(0.1), None, &mut RoundLedger::new()).unwrap();
        assert_eq!((hp.classes, hp.class_of.clone()), (1, vec![0, 0]));
        let (o, _) = acyclic_orientation(&edge, eps(0.1), None, &mut RoundLedger::new()).unwrap();
        assert_eq!(o.tail(&edge, 0), 0);
        let path = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let hp = h_partition(&path, eps(0.5), None, &mut RoundLedger::new()).unwrap();
        assert_eq!(hp.classes, 1);
        let tri = MultiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let (o, _) = acyclic_orientation(&tri, eps(0.5), None, &mut RoundLedger::new()).unwrap();
        assert!(check_orientation(&tri, &o, 2, true).ok);
        assert_eq!(o.outdegrees(&tri), vec![2, 1, 0]);
    }

    #[test]
    fn stalls_with_too_small_bound() {
        let k4 = MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(peel(&k4, 2, &mut RoundLedger::new()), Err(Error::BoundTooSmall { bound: 2, remaining: 4 }));
    }
}
