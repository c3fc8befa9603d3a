//! Checkers for every decomposition kind, plus the exhaustive minimum
//! diameter oracle.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, PaletteSet, PartialColoring};
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Orientation, Vertex};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub subject: String,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub kind: String,
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub metrics: BTreeMap<String, f64>,
}

impl ValidityReport {
    fn new(kind: &str) -> Self {
        Self { kind: kind.into(), ok: true, violations: Vec::new(), metrics: BTreeMap::new() }
    }

    fn violate(&mut self, subject: String, description: impl Into<String>) {
        self.ok = false;
        self.violations.push(Violation { subject, description: description.into() });
    }

    fn metric(&mut self, name: &str, value: impl Into<f64>) {
        self.metrics.insert(name.into(), value.into());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Edge ids of each color class.
pub fn color_classes(coloring: &PartialColoring) -> BTreeMap<Color, Vec<EdgeId>> {
    let mut classes: BTreeMap<Color, Vec<EdgeId>> = BTreeMap::new();
    for (e, c) in coloring.assignment().iter().enumerate() {
        if let Some(c) = c {
            classes.entry(*c).or_default().push(e);
        }
    }
    classes
}

fn length_mismatch(g: &MultiGraph, len: usize, report: &mut ValidityReport) -> bool {
    if len != g.edge_count() {
        report.violate("graph".into(), format!("{len} entries for {} edges", g.edge_count()));
        return true;
    }
    false
}

/// Colors whose class closes a cycle, with the first offending edge.
fn cyclic_colors(g: &MultiGraph, coloring: &PartialColoring) -> Vec<(Color, EdgeId)> {
    let mut out = Vec::new();
    for (c, edges) in color_classes(coloring) {
        let mut dsu = DisjointSets::new(g.vertex_count());
        if let Some(&e) = edges.iter().find(|&&e| {
            let (u, v) = g.endpoints(e);
            !dsu.union(u, v)
        }) {
            out.push((c, e));
        }
    }
    out
}

pub fn check_forest_decomposition(
    g: &MultiGraph,
    coloring: &PartialColoring,
    palettes: Option<&PaletteSet>,
) -> ValidityReport {
    let mut report = ValidityReport::new("forest_decomposition");
    if length_mismatch(g, coloring.len(), &mut report) {
        return report;
    }
    for (c, e) in cyclic_colors(g, coloring) {
        report.violate(format!("color {c}"), format!("cycle closed by edge {e}"));
    }
    if let Some(p) = palettes {
        if p.len() != g.edge_count() {
            report.violate("palettes".into(), format!("{} lists for {} edges", p.len(), g.edge_count()));
        } else {
            for e in g.edge_ids() {
                if let Some(c) = coloring.get(e) {
                    if !p.contains(e, c) {
                        report.violate(format!("edge {e}"), format!("color {c} not in its palette"));
                    }
                }
            }
        }
    }
    report.metric("colors", coloring.color_count() as f64);
    report.metric("uncolored", (g.edge_count() - coloring.colored_count()) as f64);
    report
}

/// Every color class must be a forest of stars: each component has a vertex
/// meeting all of its edges.
pub fn check_star_forest(g: &MultiGraph, coloring: &PartialColoring) -> ValidityReport {
    let mut report = check_forest_decomposition(g, coloring, None);
    report.kind = "star_forest".into();
    if !report.ok {
        return report;
    }
    for (c, edges) in color_classes(coloring) {
        let mut dsu = DisjointSets::new(g.vertex_count());
        let mut degree: BTreeMap<Vertex, usize> = BTreeMap::new();
        for &e in &edges {
            let (u, v) = g.endpoints(e);
            dsu.union(u, v);
            *degree.entry(u).or_default() += 1;
            *degree.entry(v).or_default() += 1;
        }
        let mut size: BTreeMap<Vertex, usize> = BTreeMap::new();
        for &e in &edges {
            *size.entry(dsu.find(g.endpoints(e).0)).or_default() += 1;
        }
        let mut centered: BTreeMap<Vertex, bool> = BTreeMap::new();
        for (&v, &d) in &degree {
            let root = dsu.find(v);
            *centered.entry(root).or_default() |= d == size[&root];
        }
        for (root, ok) in centered {
            if !ok {
                report.violate(format!("color {c}"), format!("component of vertex {root} is not a star"));
            }
        }
    }
    report
}

fn farthest(adj: &BTreeMap<Vertex, Vec<Vertex>>, start: Vertex) -> (Vertex, usize, Vec<Vertex>) {
    let mut dist: BTreeMap<Vertex, usize> = BTreeMap::from([(start, 0)]);
    let mut queue = VecDeque::from([start]);
    let mut best = (start, 0);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d > best.1 {
            best = (x, d);
        }
        for &y in &adj[&x] {
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                e.insert(d + 1);
                queue.push_back(y);
            }
        }
    }
    (best.0, best.1, dist.into_keys().collect())
}

/// Largest tree diameter of every color class, measured inside the class.
pub fn color_class_diameters(g: &MultiGraph, coloring: &PartialColoring) -> Result<BTreeMap<Color, usize>> {
    if let Some(&(c, _)) = cyclic_colors(g, coloring).first() {
        return Err(Error::CyclicColorClass { color: c });
    }
    let mut out = BTreeMap::new();
    for (c, edges) in color_classes(coloring) {
        let mut adj: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for &e in &edges {
            let (u, v) = g.endpoints(e);
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let mut seen = std::collections::BTreeSet::new();
        let mut diameter = 0;
        for &v in adj.keys() {
            if seen.contains(&v) {
                continue;
            }
            let (end, _, members) = farthest(&adj, v);
            seen.extend(members);
            diameter = diameter.max(farthest(&adj, end).1);
        }
        out.insert(c, diameter);
    }
    Ok(out)
}

/// Largest tree diameter over all color classes, 0 when nothing is colored.
pub fn max_color_diameter(g: &MultiGraph, coloring: &PartialColoring) -> Result<usize> {
    Ok(color_class_diameters(g, coloring)?.into_values().max().unwrap_or(0))
}

pub fn is_acyclic_orientation(g: &MultiGraph, o: &Orientation) -> bool {
    let mut indeg = vec![0usize; g.vertex_count()];
    let out = o.out_edges(g);
    for e in g.edge_ids() {
        indeg[o.head(g, e)] += 1;
    }
    let mut stack: Vec<Vertex> = g.vertices().filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &e in &out[v] {
            let h = o.head(g, e);
            indeg[h] -= 1;
            if indeg[h] == 0 {
                stack.push(h);
            }
        }
    }
    seen == g.vertex_count()
}

/// Outdegree at most `k` everywhere; with `require_acyclic`, also no directed
/// cycle.
pub fn check_orientation(g: &MultiGraph, o: &Orientation, k: usize, require_acyclic: bool) -> ValidityReport {
    let mut report = ValidityReport::new("orientation");
    if length_mismatch(g, o.len(), &mut report) {
        return report;
    }
    let out = o.outdegrees(g);
    for (v, &d) in out.iter().enumerate() {
        if d > k {
            report.violate(format!("vertex {v}"), format!("outdegree {d} exceeds {k}"));
        }
    }
    let acyclic = is_acyclic_orientation(g, o);
    if require_acyclic && !acyclic {
        report.violate("orientation".into(), "contains a directed cycle");
    }
    report.metric("max_outdegree", out.into_iter().max().unwrap_or(0) as f64);
    report.metric("acyclic", if acyclic { 1.0 } else { 0.0 });
    report
}

/// Union-find with undo, for backtracking searches.
struct RollbackSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    history: Vec<Option<(usize, usize)>>,
}

impl RollbackSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), size: vec![1; n], history: Vec::new() }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.history.push(Some((a, b)));
        true
    }

    fn undo(&mut self) {
        if let Some(Some((a, b))) = self.history.pop() {
            self.parent[b] = b;
            self.size[a] -= self.size[b];
        }
    }
}

/// Result of the exhaustive search over all `k`-colorings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinDiameterFd {
    /// Smallest achievable maximum tree diameter, or `None` if no `k`-FD exists.
    pub diameter: Option<usize>,
    pub coloring: Option<PartialColoring>,
    pub leaves_visited: u64,
}

pub const ENUMERATION_BUDGET: u128 = 100_000_000;

/// Minimum over all forest decompositions with colors `0..k` of the largest
/// tree diameter. The first edge is fixed to color 0.
pub fn exhaustive_min_diameter_fd(g: &MultiGraph, k: usize) -> Result<MinDiameterFd> {
    exhaustive_min_diameter_fd_with_budget(g, k, ENUMERATION_BUDGET)
}

pub fn exhaustive_min_diameter_fd_with_budget(g: &MultiGraph, k: usize, budget: u128) -> Result<MinDiameterFd> {
    let m = g.edge_count();
    let size = (0..m).try_fold(1u128, |acc, _| acc.checked_mul(k as u128)).unwrap_or(u128::MAX);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    let mut search = Search {
        g,
        k,
        sets: (0..k).map(|_| RollbackSets::new(g.vertex_count())).collect(),
        current: PartialColoring::new(m),
        best: None,
        leaves: 0,
    };
    if m == 0 {
        return Ok(MinDiameterFd { diameter: Some(0), coloring: Some(search.current), leaves_visited: 1 });
    }
    if k > 0 {
        search.place(0, &[0]);
    }
    let leaves_visited = search.leaves;
    Ok(match search.best {
        Some((d, c)) => MinDiameterFd { diameter: Some(d), coloring: Some(c), leaves_visited },
        None => MinDiameterFd { diameter: None, coloring: None, leaves_visited },
    })
}

struct Search<'a> {
    g: &'a MultiGraph,
    k: usize,
    sets: Vec<RollbackSets>,
    current: PartialColoring,
    best: Option<(usize, PartialColoring)>,
    leaves: u64,
}

impl Search<'_> {
    fn place(&mut self, e: EdgeId, choices: &[usize]) {
        if e == self.g.edge_count() {
            self.leaves += 1;
            let d = max_color_diameter(self.g, &self.current).expect("search keeps classes acyclic");
            if self.best.as_ref().is_none_or(|(b, _)| d < *b) {
                self.best = Some((d, self.current.clone()));
            }
            return;
        }
        let (u, v) = self.g.endpoints(e);
        let all: Vec<usize> = (0..self.k).collect();
        for &c in choices {
            if self.sets[c].union(u, v) {
                self.current.set(e, c as Color);
                self.place(e + 1, &all);
                self.current.clear(e);
                self.sets[c].undo();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> MultiGraph {
        MultiGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn colored(cs: &[u32]) -> PartialColoring {
        PartialColoring::from_assignment(cs.iter().map(|&c| Some(c)).collect())
    }

    #[test]
    fn forest_checks() {
        assert!(!check_forest_decomposition(&tri(), &colored(&[1, 1, 1]), None).ok);
        let r = check_forest_decomposition(&tri(), &colored(&[1, 1, 2]), None);
        assert!(r.ok);
        assert_eq!(r.metrics["colors"], 2.0);
        let p = PaletteSet::from_lists(vec![vec![1], vec![1], vec![1]]).unwrap();
        assert!(!check_forest_decomposition(&tri(), &colored(&[1, 1, 2]), Some(&p)).ok);
        assert!(!check_forest_decomposition(&tri(), &colored(&[1]), None).ok);
    }

    #[test]
    fn star_checks() {
        let path = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!check_star_forest(&path, &colored(&[0, 0, 0])).ok);
        let matching = MultiGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(check_star_forest(&matching, &colored(&[0, 0])).ok);
        let double = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        assert!(!check_star_forest(&double, &colored(&[0, 0])).ok);
    }

    #[test]
    fn diameters() {
        let edge = MultiGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(max_color_diameter(&edge, &colored(&[0])).unwrap(), 1);
        let star = MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(max_color_diameter(&star, &colored(&[5, 5, 5])).unwrap(), 2);
        let path = MultiGraph::from_edges(10, (1..10).map(|i| (i - 1, i))).unwrap();
        assert_eq!(max_color_diameter(&path, &colored(&[0; 9])).unwrap(), 9);
        assert_eq!(
            color_class_diameters(&tri(), &colored(&[2, 2, 2])),
            Err(Error::CyclicColorClass { color: 2 })
        );
    }

    #[test]
    fn orientation_checks() {
        let star = MultiGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let inward = Orientation::from_tails(&star, &[1, 2, 3]);
        assert!(check_orientation(&star, &inward, 1, true).ok);
        let outward = Orientation::from_tails(&star, &[0, 0, 0]);
        assert!(!check_orientation(&star, &outward, 1, false).ok);
        let cyc = Orientation::from_tails(&tri(), &[0, 1, 2]);
        assert!(!check_orientation(&tri(), &cyc, 1, true).ok);
        assert!(check_orientation(&tri(), &cyc, 1, false).ok);
    }

    #[test]
    fn exhaustive_small_cases() {
        let two = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let r = exhaustive_min_diameter_fd(&two, 2).unwrap();
        assert_eq!(r.diameter, Some(1));
        assert_eq!(exhaustive_min_diameter_fd(&tri(), 1).unwrap().diameter, None);
        assert!(matches!(
            exhaustive_min_diameter_fd_with_budget(&tri(), 3, 26),
            Err(Error::BudgetExceeded { size: 27, budget: 26 })
        ));
    }
}
