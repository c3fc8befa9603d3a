//! Augmenting sequences for partial list forest decompositions: recolor a
//! chain of edges so that one more edge becomes colored while every color
//! class stays a forest.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, PaletteSet, PartialColoring};
use crate::error::{Condition, Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::params::{log_base_ceil, Epsilon};
use crate::runtime::RoundLedger;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentingSequence {
    pub edges: Vec<EdgeId>,
    #[serde(rename = "color")]
    pub final_color: Color,
}

impl AugmentingSequence {
    pub fn new(edges: Vec<EdgeId>, final_color: Color) -> Self {
        Self { edges, final_color }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("sequence serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct TreeNode {
    parent: Option<(Vertex, EdgeId)>,
    depth: usize,
    root: Vertex,
}

/// Rooted view of every color class, rebuilt per color on change.
pub(crate) struct ColorForests {
    members: BTreeMap<Color, BTreeSet<EdgeId>>,
    nodes: HashMap<Color, HashMap<Vertex, TreeNode>>,
}

impl ColorForests {
    pub(crate) fn new(g: &MultiGraph, coloring: &PartialColoring) -> Result<Self> {
        let mut members: BTreeMap<Color, BTreeSet<EdgeId>> = BTreeMap::new();
        for (e, c) in coloring.assignment().iter().enumerate() {
            if let Some(c) = c {
                members.entry(*c).or_default().insert(e);
            }
        }
        let mut forests = Self { members, nodes: HashMap::new() };
        let colors: Vec<Color> = forests.members.keys().copied().collect();
        for c in colors {
            forests.rebuild(g, c)?;
        }
        Ok(forests)
    }

    fn rebuild(&mut self, g: &MultiGraph, c: Color) -> Result<()> {
        let Some(edges) = self.members.get(&c) else {
            self.nodes.remove(&c);
            return Ok(());
        };
        let mut adjacency: BTreeMap<Vertex, Vec<(Vertex, EdgeId)>> = BTreeMap::new();
        for &e in edges {
            let (u, v) = g.endpoints(e);
            adjacency.entry(u).or_default().push((v, e));
            adjacency.entry(v).or_default().push((u, e));
        }
        let mut nodes: HashMap<Vertex, TreeNode> = HashMap::with_capacity(adjacency.len());
        for &start in adjacency.keys() {
            if nodes.contains_key(&start) {
                continue;
            }
            nodes.insert(start, TreeNode { parent: None, depth: 0, root: start });
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                let here = nodes[&x];
                for &(y, e) in &adjacency[&x] {
                    if here.parent.is_some_and(|(_, pe)| pe == e) {
                        continue;
                    }
                    if nodes.contains_key(&y) {
                        return Err(Error::CyclicColorClass { color: c });
                    }
                    nodes.insert(y, TreeNode { parent: Some((x, e)), depth: here.depth + 1, root: start });
                    stack.push(y);
                }
            }
        }
        self.nodes.insert(c, nodes);
        Ok(())
    }

    /// The `u`-`v` path in color class `c`, ordered from `u`; empty when
    /// the endpoints lie in different trees.
    fn path(&self, u: Vertex, v: Vertex, c: Color) -> Vec<EdgeId> {
        let Some(nodes) = self.nodes.get(&c) else {
            return Vec::new();
        };
        let (Some(&nu), Some(&nv)) = (nodes.get(&u), nodes.get(&v)) else {
            return Vec::new();
        };
        if nu.root != nv.root {
            return Vec::new();
        }
        let (mut a, mut b) = ((u, nu), (v, nv));
        let (mut from_u, mut from_v) = (Vec::new(), Vec::new());
        while a.0 != b.0 {
            if a.1.depth >= b.1.depth {
                let (p, e) = a.1.parent.expect("non-root has a parent");
                from_u.push(e);
                a = (p, nodes[&p]);
            } else {
                let (p, e) = b.1.parent.expect("non-root has a parent");
                from_v.push(e);
                b = (p, nodes[&p]);
            }
        }
        from_u.extend(from_v.into_iter().rev());
        from_u
    }

    /// The cycle that coloring `e` with `c` would close: `{e}` when `e`
    /// already has color `c`.
    pub(crate) fn cycle(&self, g: &MultiGraph, coloring: &PartialColoring, e: EdgeId, c: Color) -> Vec<EdgeId> {
        if coloring.get(e) == Some(c) {
            return vec![e];
        }
        let (u, v) = g.endpoints(e);
        self.path(u, v, c)
    }

    fn recolor(&mut self, g: &MultiGraph, changes: &[(EdgeId, Option<Color>, Option<Color>)]) -> Result<()> {
        let mut touched = BTreeSet::new();
        for &(e, old, new) in changes {
            if let Some(c) = old {
                let set = self.members.get_mut(&c).expect("old color present");
                set.remove(&e);
                if set.is_empty() {
                    self.members.remove(&c);
                }
                touched.insert(c);
            }
            if let Some(c) = new {
                self.members.entry(c).or_default().insert(e);
                touched.insert(c);
            }
        }
        for c in touched {
            self.rebuild(g, c)?;
        }
        Ok(())
    }
}

/// `C(e, c)`: the path in color class `c` between the endpoints of `e`, or
/// `{e}` when `e` itself has color `c`.
pub fn fundamental_path(g: &MultiGraph, coloring: &PartialColoring, e: EdgeId, c: Color) -> Result<Vec<EdgeId>> {
    if coloring.get(e) == Some(c) {
        return Ok(vec![e]);
    }
    let mut only_c = PartialColoring::new(coloring.len());
    for (f, fc) in coloring.assignment().iter().enumerate() {
        if *fc == Some(c) {
            only_c.set(f, c);
        }
    }
    Ok(ColorForests::new(g, &only_c)?.cycle(g, coloring, e, c))
}

/// How far the `NoEarlierCycle` condition reaches. `PaletteRestricted` only
/// forbids an edge on the cycle an earlier edge closes in the later edge's
/// color when that color is in the earlier edge's palette, which is all that
/// applying the sequence relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BackIncidence {
    Strict,
    PaletteRestricted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceViolation {
    pub condition: Condition,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub valid: bool,
    pub violation: Option<SequenceViolation>,
}

impl SequenceReport {
    fn from_violation(violation: Option<SequenceViolation>) -> Self {
        Self { valid: violation.is_none(), violation }
    }

    pub fn into_result(self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some(v) => Err(Error::InvalidSequence { condition: v.condition, index: v.index }),
        }
    }
}

fn first_violation(
    g: &MultiGraph,
    forests: &ColorForests,
    coloring: &PartialColoring,
    palettes: &PaletteSet,
    seq: &AugmentingSequence,
    mode: BackIncidence,
) -> Option<SequenceViolation> {
    let fail = |condition, index| Some(SequenceViolation { condition, index });
    let edges = &seq.edges;
    if edges.is_empty() || coloring.get(edges[0]).is_some() {
        return fail(Condition::StartsUncolored, 0);
    }
    for i in 1..edges.len() {
        let ok = edges[i] != edges[i - 1]
            && coloring
                .get(edges[i])
                .is_some_and(|c| forests.cycle(g, coloring, edges[i - 1], c).contains(&edges[i]));
        if !ok {
            return fail(Condition::FollowsCycles, i);
        }
    }
    for i in 2..edges.len() {
        let c = coloring.get(edges[i]).expect("checked by FollowsCycles");
        for j in 0..i - 1 {
            if mode == BackIncidence::PaletteRestricted && !palettes.contains(edges[j], c) {
                continue;
            }
            if forests.cycle(g, coloring, edges[j], c).contains(&edges[i]) {
                return fail(Condition::NoEarlierCycle, i);
            }
        }
    }
    let last = *edges.last().expect("nonempty");
    if !forests.cycle(g, coloring, last, seq.final_color).is_empty() {
        return fail(Condition::FinalColorFree, edges.len() - 1);
    }
    for i in 0..edges.len() {
        let next = match edges.get(i + 1) {
            Some(&f) => coloring.get(f).expect("checked by FollowsCycles"),
            None => seq.final_color,
        };
        if !palettes.contains(edges[i], next) {
            return fail(Condition::InPalette, i);
        }
    }
    None
}

/// Checks every sequence condition in order and reports the first failure.
pub fn is_augmenting_sequence(
    g: &MultiGraph,
    coloring: &PartialColoring,
    palettes: &PaletteSet,
    seq: &AugmentingSequence,
) -> Result<SequenceReport> {
    check_sequence(g, coloring, palettes, seq, BackIncidence::Strict)
}

pub fn check_sequence(
    g: &MultiGraph,
    coloring: &PartialColoring,
    palettes: &PaletteSet,
    seq: &AugmentingSequence,
    mode: BackIncidence,
) -> Result<SequenceReport> {
    let forests = ColorForests::new(g, coloring)?;
    Ok(SequenceReport::from_violation(first_violation(g, &forests, coloring, palettes, seq, mode)))
}

fn shift_colors(coloring: &mut PartialColoring, seq: &AugmentingSequence) -> Vec<(EdgeId, Option<Color>, Option<Color>)> {
    let new_colors: Vec<Color> = seq.edges[1..]
        .iter()
        .map(|&f| coloring.get(f).expect("validated"))
        .chain(std::iter::once(seq.final_color))
        .collect();
    let mut changes = Vec::with_capacity(seq.len());
    for (&e, c) in seq.edges.iter().zip(new_colors) {
        changes.push((e, coloring.get(e), Some(c)));
        coloring.set(e, c);
    }
    changes
}

/// Shifts each color one step back along the sequence and gives the last
/// edge the final color. Refuses sequences that fail validation.
pub fn apply_augmentation(
    g: &MultiGraph,
    coloring: &mut PartialColoring,
    palettes: &PaletteSet,
    seq: &AugmentingSequence,
) -> Result<()> {
    check_sequence(g, coloring, palettes, seq, BackIncidence::PaletteRestricted)?.into_result()?;
    shift_colors(coloring, seq);
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discovery {
    pub sequence: AugmentingSequence,
    /// `|E_1|, |E_2|, ...` up to the layer in which a free color turned up.
    pub layer_sizes: Vec<usize>,
}

impl Discovery {
    pub fn layer_count(&self) -> usize {
        self.layer_sizes.len()
    }
}

/// Twice the layer bound for palettes of size `(1 + eps) a`, plus slack.
pub fn default_radius_cap(n: usize, eps: Epsilon) -> usize {
    2 * (log_base_ceil(n, eps.get()) + 2)
}

fn discover(
    g: &MultiGraph,
    forests: &ColorForests,
    coloring: &PartialColoring,
    palettes: &PaletteSet,
    e_init: EdgeId,
    radius_cap: usize,
) -> Result<Discovery> {
    let mut in_set = vec![false; g.edge_count()];
    let mut near = vec![false; g.vertex_count()];
    let mut order = vec![e_init];
    let mut via: HashMap<EdgeId, EdgeId> = HashMap::new();
    let mut cache: HashMap<(EdgeId, Color), Vec<EdgeId>> = HashMap::new();
    in_set[e_init] = true;
    let (u, v) = g.endpoints(e_init);
    near[u] = true;
    near[v] = true;
    let mut layer_sizes = Vec::new();
    for _ in 0..radius_cap {
        layer_sizes.push(order.len());
        let mut added: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
        for &e in &order {
            for &c in palettes.palette(e) {
                let cycle = cache.entry((e, c)).or_insert_with(|| forests.cycle(g, coloring, e, c));
                if cycle.is_empty() {
                    let mut edges = vec![e];
                    let mut cur = e;
                    while let Some(&prev) = via.get(&cur) {
                        edges.push(prev);
                        cur = prev;
                    }
                    edges.reverse();
                    return Ok(Discovery { sequence: AugmentingSequence::new(edges, c), layer_sizes });
                }
                for &f in cycle.iter() {
                    let (a, b) = g.endpoints(f);
                    if !in_set[f] && (near[a] || near[b]) {
                        added.entry(f).or_insert(e);
                    }
                }
            }
        }
        if added.is_empty() {
            return Err(Error::Stuck { edge: e_init });
        }
        for (f, e) in added {
            in_set[f] = true;
            via.insert(f, e);
            order.push(f);
            let (a, b) = g.endpoints(f);
            near[a] = true;
            near[b] = true;
        }
    }
    Err(Error::RadiusExceeded { edge: e_init, cap: radius_cap })
}

/// Layered search from an uncolored edge. Each layer adds the edges of the
/// cycles `C(e, c)` that touch the current edge set; the first `(e, c)` in
/// (layer, edge id, color) order with no cycle ends the search. The result
/// satisfies every condition except `NoEarlierCycle`.
pub fn find_almost_augmenting(
    g: &MultiGraph,
    coloring: &PartialColoring,
    palettes: &PaletteSet,
    e_init: EdgeId,
    radius_cap: usize,
) -> Result<Discovery> {
    if coloring.get(e_init).is_some() {
        return Err(Error::Precondition(format!("edge {e_init} is already colored")));
    }
    let forests = ColorForests::new(g, coloring)?;
    discover(g, &forests, coloring, palettes, e_init, radius_cap)
}

fn splice(
    g: &MultiGraph,
    forests: &ColorForests,
    coloring: &PartialColoring,
    palettes: &PaletteSet,
    mut seq: AugmentingSequence,
) -> AugmentingSequence {
    'outer: loop {
        for i in 2..seq.len() {
            let c = coloring.get(seq.edges[i]).expect("almost augmenting");
            for j in 0..i - 1 {
                if palettes.contains(seq.edges[j], c) && forests.cycle(g, coloring, seq.edges[j], c).contains(&seq.edges[i]) {
                    seq.edges.drain(j + 1..i);
                    continue 'outer;
                }
            }
        }
        return seq;
    }
}

/// Cuts out the edges strictly between an earlier edge and a later one that
/// lies on the cycle the earlier edge closes in the later edge's color, as
/// long as the splice keeps `InPalette`, until no such pair is left.
pub fn shortcut(
    g: &MultiGraph,
    coloring: &PartialColoring,
    palettes: &PaletteSet,
    seq: AugmentingSequence,
) -> Result<AugmentingSequence> {
    let forests = ColorForests::new(g, coloring)?;
    Ok(splice(g, &forests, coloring, palettes, seq))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentStats {
    pub augmentations: usize,
    pub max_layers: usize,
    pub max_length: usize,
}

/// Colors every uncolored edge of `edges`, in id order, by discovering,
/// shortcutting and applying one sequence per edge. Colored edges stay
/// colored and only edges near `edges` change.
pub fn color_edge_set(
    g: &MultiGraph,
    coloring: &mut PartialColoring,
    palettes: &PaletteSet,
    edges: &[EdgeId],
    radius_cap: usize,
    ledger: &mut RoundLedger,
) -> Result<AugmentStats> {
    let mut todo: Vec<EdgeId> = edges.iter().copied().filter(|&e| coloring.get(e).is_none()).collect();
    todo.sort_unstable();
    todo.dedup();
    let mut stats = AugmentStats::default();
    if todo.is_empty() {
        return Ok(stats);
    }
    let mut forests = ColorForests::new(g, coloring)?;
    for e in todo {
        let found = discover(g, &forests, coloring, palettes, e, radius_cap)?;
        let seq = splice(g, &forests, coloring, palettes, found.sequence);
        stats.augmentations += 1;
        stats.max_layers = stats.max_layers.max(found.layer_sizes.len());
        stats.max_length = stats.max_length.max(seq.len());
        let changes = shift_colors(coloring, &seq);
        forests.recolor(g, &changes)?;
    }
    ledger.charge("augment/gather", stats.max_layers as u64, 1);
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distances, generate, Family, GeneratorSpec};
    use crate::verify::check_forest_decomposition;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn coloring(colors: &[Option<Color>]) -> PartialColoring {
        PartialColoring::from_assignment(colors.to_vec())
    }

    #[test]
    fn fundamental_paths() {
        let g = MultiGraph::from_edges(3, [(0, 2), (2, 1), (0, 1)]).unwrap();
        let state = coloring(&[Some(5), Some(5), None]);
        assert_eq!(fundamental_path(&g, &state, 2, 5).unwrap(), vec![0, 1]);
        assert!(fundamental_path(&g, &state, 2, 6).unwrap().is_empty());
        assert_eq!(fundamental_path(&g, &state, 0, 5).unwrap(), vec![0]);
        let split = coloring(&[Some(5), None, None]);
        assert!(fundamental_path(&g, &split, 2, 5).unwrap().is_empty());
        let cyclic = coloring(&[Some(1), Some(1), Some(1)]);
        assert!(fundamental_path(&g, &cyclic, 0, 2).unwrap().is_empty());
        let g4 = MultiGraph::from_edges(3, [(0, 2), (2, 1), (0, 1), (0, 1)]).unwrap();
        let cyclic = coloring(&[Some(1), Some(1), Some(1), None]);
        assert_eq!(fundamental_path(&g4, &cyclic, 3, 1), Err(Error::CyclicColorClass { color: 1 }));
    }

    #[test]
    fn sequence_conditions() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        let state = coloring(&[None, Some(1), Some(2)]);
        let pal = PaletteSet::from_lists(vec![vec![1, 2], vec![1, 2], vec![2, 3]]).unwrap();
        let report = |edges: Vec<EdgeId>, c| is_augmenting_sequence(&g, &state, &pal, &AugmentingSequence::new(edges, c)).unwrap();
        let one = MultiGraph::from_edges(2, [(0, 1)]).unwrap();
        let single = is_augmenting_sequence(&one, &coloring(&[None]), &PaletteSet::uniform(1, 1), &AugmentingSequence::new(vec![0], 0)).unwrap();
        assert!(single.valid);
        assert_eq!(report(vec![1], 3).violation.unwrap().condition, Condition::StartsUncolored);
        // e3 lies on C(e1, 2) as well as on C(e2, 2).
        let back = report(vec![0, 1, 2], 3);
        assert_eq!(back.violation, Some(SequenceViolation { condition: Condition::NoEarlierCycle, index: 2 }));
        assert_eq!(report(vec![0, 2], 2).violation.unwrap().condition, Condition::FinalColorFree);
        assert!(report(vec![0, 2], 3).valid);
        assert_eq!(report(vec![0, 1], 3).violation, Some(SequenceViolation { condition: Condition::InPalette, index: 1 }));
        assert_eq!(report(vec![0, 1, 1], 3).violation.unwrap().condition, Condition::FollowsCycles);
    }

    #[test]
    fn apply_examples() {
        let g = MultiGraph::from_edges(2, [(0, 1)]).unwrap();
        let mut state = coloring(&[None]);
        apply_augmentation(&g, &mut state, &PaletteSet::uniform(1, 2), &AugmentingSequence::new(vec![0], 1)).unwrap();
        assert_eq!(state.get(0), Some(1));

        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let mut state = coloring(&[None, Some(0)]);
        apply_augmentation(&g, &mut state, &PaletteSet::uniform(2, 2), &AugmentingSequence::new(vec![0, 1], 1)).unwrap();
        assert_eq!(state.assignment(), &[Some(0), Some(1)]);

        let mut state = coloring(&[None, Some(0)]);
        let bad = apply_augmentation(&g, &mut state, &PaletteSet::uniform(2, 2), &AugmentingSequence::new(vec![0], 0));
        assert!(matches!(bad, Err(Error::InvalidSequence { condition: Condition::FinalColorFree, .. })));
        assert_eq!(state.get(0), None);
    }

    #[test]
    fn two_vertex_discovery() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
        let state = coloring(&[Some(1), Some(2), None]);
        let pal = PaletteSet::from_lists(vec![vec![1, 3], vec![2], vec![1, 2]]).unwrap();
        let found = find_almost_augmenting(&g, &state, &pal, 2, 10).unwrap();
        assert_eq!(found.sequence, AugmentingSequence::new(vec![2, 0], 3));
        assert_eq!(found.layer_sizes, vec![1, 3]);
        let mut out = state.clone();
        apply_augmentation(&g, &mut out, &pal, &found.sequence).unwrap();
        assert!(out.is_total());
        assert!(check_forest_decomposition(&g, &out, Some(&pal)).ok);

        // Brute force: no length-1 fix exists, so two edges must move.
        let direct = pal.palette(2).iter().any(|&c| fundamental_path(&g, &state, 2, c).unwrap().is_empty());
        assert!(!direct);
        let mut full = 0;
        for a in pal.palette(0) {
            for b in pal.palette(1) {
                for c in pal.palette(2) {
                    let cand = coloring(&[Some(*a), Some(*b), Some(*c)]);
                    if check_forest_decomposition(&g, &cand, Some(&pal)).ok {
                        full += 1;
                        assert_eq!(cand.assignment(), out.assignment());
                    }
                }
            }
        }
        assert_eq!(full, 1);
    }

    #[test]
    fn free_color_is_immediate() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let state = coloring(&[Some(0), None]);
        let found = find_almost_augmenting(&g, &state, &PaletteSet::uniform(2, 2), 1, 5).unwrap();
        assert_eq!(found.sequence, AugmentingSequence::new(vec![1], 1));
        assert_eq!(found.layer_count(), 1);
        assert!(matches!(find_almost_augmenting(&g, &state, &PaletteSet::uniform(2, 2), 0, 5), Err(Error::Precondition(_))));
    }

    #[test]
    fn discovery_limits() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let state = coloring(&[Some(0), None]);
        let pal = PaletteSet::uniform(2, 1);
        assert_eq!(find_almost_augmenting(&g, &state, &pal, 1, 5), Err(Error::Stuck { edge: 1 }));
        assert_eq!(find_almost_augmenting(&g, &state, &pal, 1, 1), Err(Error::RadiusExceeded { edge: 1, cap: 1 }));
    }

    #[test]
    fn shortcut_examples() {
        // e1=(0,1) uncolored, e2=(0,2) and f=(2,1) color 1, e3=(0,2) color 2,
        // e4=(0,2) color 3: e4 also lies on C(e2, 3).
        let g = MultiGraph::from_edges(3, [(0, 1), (0, 2), (2, 1), (0, 2), (0, 2)]).unwrap();
        let state = coloring(&[None, Some(1), Some(1), Some(2), Some(3)]);
        let pal = PaletteSet::from_lists(vec![vec![1], vec![2, 3], vec![1], vec![3], vec![4]]).unwrap();
        let almost = AugmentingSequence::new(vec![0, 1, 3, 4], 4);
        let before = is_augmenting_sequence(&g, &state, &pal, &almost).unwrap();
        assert_eq!(before.violation, Some(SequenceViolation { condition: Condition::NoEarlierCycle, index: 3 }));
        let short = shortcut(&g, &state, &pal, almost).unwrap();
        assert_eq!(short.edges, vec![0, 1, 4]);
        assert!(is_augmenting_sequence(&g, &state, &pal, &short).unwrap().valid);
        assert_eq!(shortcut(&g, &state, &pal, short.clone()).unwrap(), short);
        let mut out = state.clone();
        apply_augmentation(&g, &mut out, &pal, &short).unwrap();
        assert_eq!(out.assignment(), &[Some(1), Some(3), Some(1), Some(2), Some(4)]);
    }

    #[test]
    fn edge_set_examples() {
        let g = MultiGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let pal = PaletteSet::uniform(3, 2);
        let mut state = coloring(&[Some(0), Some(0), Some(1)]);
        let stats = color_edge_set(&g, &mut state, &pal, &[0, 1, 2], 8, &mut RoundLedger::new()).unwrap();
        assert_eq!(stats.augmentations, 0);
        let mut state = coloring(&[Some(0), Some(0), None]);
        let stats = color_edge_set(&g, &mut state, &pal, &[2], 8, &mut RoundLedger::new()).unwrap();
        assert_eq!(stats.augmentations, 1);
        assert!(state.is_total());
    }

    /// A partial coloring of a union of `k` forests with palettes of size
    /// `ceil((1 + eps) k)`, built by random greedy insertion.
    fn random_instance(seed: u64, n: usize, k: usize, eps: f64) -> (MultiGraph, PartialColoring, PaletteSet) {
        let g = generate(&GeneratorSpec::new(Family::RandomForestUnion { n, k }, seed)).unwrap();
        let colors = crate::params::ceil_tol((1.0 + eps) * k as f64);
        let pal = PaletteSet::uniform(g.edge_count(), colors);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
        let mut ids: Vec<EdgeId> = g.edge_ids().collect();
        ids.shuffle(&mut rng);
        let mut state = PartialColoring::new(g.edge_count());
        let mut sets: Vec<crate::dsu::DisjointSets> = (0..colors).map(|_| crate::dsu::DisjointSets::new(n)).collect();
        for e in ids {
            if rng.random_bool(0.3) {
                continue;
            }
            let c = rng.random_range(0..colors);
            let (u, v) = g.endpoints(e);
            if sets[c].union(u, v) {
                state.set(e, c as Color);
            }
        }
        (g, state, pal)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn augmentation_keeps_forests(seed in 0u64..10_000, k in 1usize..4, eps_idx in 0usize..3) {
            let eps = [0.25, 0.5, 1.0][eps_idx];
            let (g, mut state, pal) = random_instance(seed, 40, k, eps);
            let n = g.vertex_count();
            let layer_bound = log_base_ceil(n, eps) + 1;
            let uncolored: Vec<EdgeId> = state.uncolored().collect();
            for e in uncolored {
                let found = find_almost_augmenting(&g, &state, &pal, e, 4 * layer_bound).unwrap();
                prop_assert!(found.layer_count() <= layer_bound);
                for w in found.layer_sizes.windows(2).skip(1) {
                    prop_assert!(w[1] as f64 >= (1.0 + eps) * w[0] as f64 - 1e-9);
                }
                let dist = bfs_distances(&g, &[g.endpoints(e).0, g.endpoints(e).1], usize::MAX);
                for &f in &found.sequence.edges {
                    let (a, b) = g.endpoints(f);
                    prop_assert!(dist[a].min(dist[b]) < found.layer_count());
                }
                let seq = shortcut(&g, &state, &pal, found.sequence).unwrap();
                prop_assert!(is_augmenting_sequence(&g, &state, &pal, &seq).unwrap().valid);
                let before = state.colored_count();
                apply_augmentation(&g, &mut state, &pal, &seq).unwrap();
                prop_assert_eq!(state.colored_count(), before + 1);
                for w in seq.edges.windows(2) {
                    prop_assert_ne!(state.get(w[0]), state.get(w[1]));
                }
                prop_assert!(check_forest_decomposition(&g, &state, Some(&pal)).ok);
            }
            prop_assert!(state.is_total());
        }

        #[test]
        fn edge_set_completes_and_stays_local(seed in 0u64..10_000) {
            let (g, state, pal) = random_instance(seed, 60, 2, 0.5);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let targets: Vec<EdgeId> = state.uncolored().filter(|_| rng.random_bool(0.5)).collect();
            let mut out = state.clone();
            let cap = default_radius_cap(g.vertex_count(), Epsilon::new(0.5).unwrap());
            let stats = color_edge_set(&g, &mut out, &pal, &targets, cap, &mut RoundLedger::new()).unwrap();
            prop_assert_eq!(stats.augmentations, targets.len());
            prop_assert!(check_forest_decomposition(&g, &out, Some(&pal)).ok);
            let mut centers = Vec::new();
            for &e in &targets {
                prop_assert!(out.get(e).is_some());
                let (a, b) = g.endpoints(e);
                centers.extend([a, b]);
            }
            let dist = bfs_distances(&g, &centers, usize::MAX);
            for f in g.edge_ids() {
                if state.get(f).is_some() {
                    prop_assert!(out.get(f).is_some());
                }
                let (a, b) = g.endpoints(f);
                if out.get(f) != state.get(f) {
                    prop_assert!(dist[a].min(dist[b]) < stats.max_layers.max(1));
                }
            }
        }
    }
}
