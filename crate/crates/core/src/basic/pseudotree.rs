//! Splitting a connected pseudo-tree into two star forests.
//!
//! Hanging trees are colored by depth parity, so a tree edge never blocks
//! anything; the only freedom left is the color `h` each cycle vertex gives
//! its tree edges and the colors of the cycle edges. A cycle edge of color
//! `c` is fine unless both endpoints have at least two `c`-edges. That
//! condition is local along the cycle, so a dynamic program over
//! `(previous color, current color, h)` decides feasibility exactly.

use std::collections::{BTreeMap, VecDeque};

use crate::coloring::PartialColoring;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};

const NO_TREE: u8 = 2;

/// Color parity from the roots, starting at `start[root]` for edges at a root.
fn color_trees(g: &MultiGraph, roots: &[(Vertex, u8)], skip: &[bool], coloring: &mut PartialColoring) {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    for &(r, start) in roots {
        seen[r] = true;
        queue.push_back((r, start));
    }
    while let Some((x, c)) = queue.pop_front() {
        for &e in g.incident(x) {
            let y = g.other(e, x);
            if skip[e] || seen[y] {
                continue;
            }
            seen[y] = true;
            coloring.set(e, u32::from(c));
            queue.push_back((y, 1 - c));
        }
    }
}

/// Vertices and edges of the unique cycle, in walking order from the
/// smallest cycle vertex.
fn find_cycle(g: &MultiGraph) -> (Vec<Vertex>, Vec<EdgeId>) {
    let n = g.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut gone = vec![false; n];
    let mut stack: Vec<Vertex> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if gone[v] {
            continue;
        }
        gone[v] = true;
        for &e in g.incident(v) {
            let w = g.other(e, v);
            if !gone[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let start = (0..n).find(|&v| !gone[v]).expect("a cycle exists");
    let on_cycle = |e: EdgeId| {
        let (u, v) = g.endpoints(e);
        !gone[u] && !gone[v]
    };
    let mut vertices = vec![start];
    let mut edges = Vec::new();
    let mut prev: Option<EdgeId> = None;
    let mut x = start;
    loop {
        let e = *g.incident(x).iter().filter(|&&e| on_cycle(e) && Some(e) != prev).min().expect("cycle continues");
        edges.push(e);
        x = g.other(e, x);
        if x == start {
            break;
        }
        vertices.push(x);
        prev = Some(e);
    }
    (vertices, edges)
}

fn heavy(prev: u8, cur: u8, h: u8, c: u8) -> bool {
    h == c || (prev == c && cur == c)
}

/// Whether cycle edge `i` (color `cur`) is allowed, given the colors around
/// both endpoints.
fn edge_ok(prev: u8, cur: u8, h: u8, next: u8, h_next: u8) -> bool {
    !(heavy(prev, cur, h, cur) && heavy(cur, next, h_next, cur))
}

type State = (u8, u8, u8, bool);

/// Cycle edge colors and tree colors `h` per cycle vertex, if any split exists.
fn solve_cycle(has_tree: &[bool]) -> Option<(Vec<u8>, Vec<u8>)> {
    let len = has_tree.len();
    let options = |i: usize| if has_tree[i] { vec![0u8, 1] } else { vec![NO_TREE] };
    for last in 0..2u8 {
        for first in 0..2u8 {
            for &h0 in &options(0) {
                let mut layers: Vec<BTreeMap<State, Option<State>>> = vec![BTreeMap::from([((last, first, h0, last != first), None)])];
                for i in 1..len {
                    let mut next = BTreeMap::new();
                    for &(p, q, h, mixed) in layers[i - 1].keys() {
                        let colors: Vec<u8> = if i == len - 1 { vec![last] } else { vec![0, 1] };
                        for r in colors {
                            for &h_next in &options(i) {
                                if edge_ok(p, q, h, r, h_next) {
                                    next.entry((q, r, h_next, mixed || q != r)).or_insert(Some((p, q, h, mixed)));
                                }
                            }
                        }
                    }
                    layers.push(next);
                }
                let end = layers[len - 1]
                    .keys()
                    .find(|&&(p, q, h, mixed)| mixed && edge_ok(p, q, h, first, h0))
                    .copied();
                if let Some(mut state) = end {
                    let mut colors = vec![0u8; len];
                    let mut hs = vec![NO_TREE; len];
                    for i in (0..len).rev() {
                        colors[i] = state.1;
                        hs[i] = state.2;
                        if let Some(prev) = layers[i][&state] {
                            state = prev;
                        }
                    }
                    return Some((colors, hs));
                }
            }
        }
    }
    None
}

/// Two star forests covering a connected loopless pseudo-tree, colored 0 and 1.
pub fn pseudotree_two_star_forests(g: &MultiGraph) -> Result<PartialColoring> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut coloring = PartialColoring::new(m);
    if n == 0 {
        return Ok(coloring);
    }
    if m > n || g.components().0 != 1 {
        return Err(Error::NotPseudoTree);
    }
    if m == n - 1 {
        color_trees(g, &[(0, 0)], &vec![false; m], &mut coloring);
        return Ok(coloring);
    }
    let (cycle, cycle_edges) = find_cycle(g);
    let mut skip = vec![false; m];
    for &e in &cycle_edges {
        skip[e] = true;
    }
    let has_tree: Vec<bool> = cycle.iter().map(|&v| g.incident(v).iter().any(|&e| !skip[e])).collect();
    let (colors, hs) = solve_cycle(&has_tree).ok_or(Error::NoTwoStarSplit)?;
    for (&e, &c) in cycle_edges.iter().zip(&colors) {
        coloring.set(e, u32::from(c));
    }
    let roots: Vec<(Vertex, u8)> = cycle.iter().zip(&hs).map(|(&v, &h)| (v, h.min(1))).collect();
    color_trees(g, &roots, &skip, &mut coloring);
    Ok(coloring)
}
