//! Complete decompositions: the main run followed by a separate
//! decomposition of whatever the cuts removed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use super::split::SplitMode;

use super::{forest_decomposition_main, split::vertex_color_split, AlgorithmParams, CutStrategy};
use crate::basic::{greedy_lfd, lsfd_4eps, peeling_bound, reduce_forest_diameter};
use crate::coloring::{Color, PaletteSet, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{arboricity_upper_bound, pseudo_arboricity, EdgeId, MultiGraph, Vertex};
use crate::params::{ceil_tol, Epsilon};
use crate::runtime::{RandomStream, RoundLedger};
use crate::verify::{check_forest_decomposition, ValidityReport};

/// Slack of the side decomposition of leftover edges.
const LEFTOVER_EPS: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdRun {
    pub coloring: PartialColoring,
    pub a_bound: usize,
    pub main_colors: usize,
    pub leftover_colors: usize,
    pub leftover_edges: Vec<EdgeId>,
    pub good: bool,
    pub retries: usize,
    pub strategy: CutStrategy,
}

impl FdRun {
    /// Colors available to the run, `main_colors + leftover_colors`.
    pub fn colors(&self) -> usize {
        self.main_colors + self.leftover_colors
    }

    pub fn report_json(&self, ledger: &RoundLedger) -> String {
        serde_json::json!({
            "colors": self.coloring.color_count(),
            "leftover_edges": self.leftover_edges.len(),
            "good": self.good,
            "retries": self.retries,
            "rounds": serde_json::from_str::<serde_json::Value>(&ledger.to_json()).expect("ledger json"),
            "strategy": self.strategy.to_string(),
        })
        .to_string()
    }
}

/// Forest decomposition with at most about `ceil((1 + eps) a)` colors when
/// `eps a >= 3`: the main run uses `eps / 10` and the leftover gets a greedy
/// decomposition along an acyclic orientation in fresh colors.
pub fn combine_fd(g: &MultiGraph, eps: Epsilon, stream: &RandomStream, ledger: &mut RoundLedger) -> Result<FdRun> {
    let a = arboricity_upper_bound(g);
    if eps.get() * (a as f64) < 3.0 - 1e-9 {
        return Err(Error::Precondition(format!("eps * a = {:.3} is below 3", eps.get() * a as f64)));
    }
    combine_fd_with(g, eps, a, None, stream, ledger)
}

/// `combine_fd` with a known arboricity bound and an optional strategy.
pub fn combine_fd_with(
    g: &MultiGraph,
    eps: Epsilon,
    a_bound: usize,
    strategy: Option<CutStrategy>,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<FdRun> {
    let n = g.vertex_count();
    let main_eps = eps.scaled(10.0);
    let a_star = pseudo_arboricity(g).0.value;
    let strategy = strategy.unwrap_or_else(|| CutStrategy::auto(main_eps, a_bound, n, true));
    let params = AlgorithmParams::new(g, main_eps, a_bound, a_star, strategy);
    let main_colors = params.palette_size();
    let palettes = PaletteSet::uniform(g.edge_count(), main_colors);
    let run = forest_decomposition_main(g, &palettes, &params, strategy, &stream.derive("fd-main", 0), ledger)?;

    let mut coloring = run.coloring.clone();
    let leftover_edges = run.leftover_edges();
    let mut leftover_colors = 0;
    if !leftover_edges.is_empty() {
        let (rest, rest_to_g) = g.edge_subgraph(&leftover_edges);
        let rest_star = pseudo_arboricity(&rest).0.value;
        let side_eps = Epsilon::new(LEFTOVER_EPS)?;
        leftover_colors = peeling_bound(side_eps, rest_star);
        let side = greedy_lfd(&rest, side_eps, Some(rest_star), &PaletteSet::uniform(rest.edge_count(), leftover_colors), ledger)?;
        for (i, &e) in rest_to_g.iter().enumerate() {
            coloring.set(e, main_colors as Color + side.get(i).expect("greedy decomposition is total"));
        }
    }
    Ok(FdRun {
        coloring,
        a_bound,
        main_colors,
        leftover_colors,
        leftover_edges,
        good: run.good,
        retries: run.retries,
        strategy,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LfdRun {
    pub coloring: PartialColoring,
    /// Edges colored from side 1, the cut leftover plus the decolored ones.
    pub side_edges: Vec<EdgeId>,
    pub leftover_edges: Vec<EdgeId>,
    pub decolored_edges: Vec<EdgeId>,
    pub split_attempts: usize,
    pub retries: usize,
    pub strategy: CutStrategy,
    pub report: ValidityReport,
}

/// Divisor of the main run's slack: `eps / 1000` (stochastic split) or
/// `eps^2 / 1000` (independent split).
const MAIN_EPS_DIVISOR: f64 = 1000.0;

/// List forest decomposition from palettes of size `ceil((1 + eps) a)`:
/// split every palette, run the main algorithm on side 0, shorten its
/// trees, and give everything left over a list star forest decomposition
/// from side 1. The merged coloring is checked against the original lists.
pub fn combine_lfd(
    g: &MultiGraph,
    palettes: &PaletteSet,
    a: usize,
    eps: Epsilon,
    mode: SplitMode,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<LfdRun> {
    let n = g.vertex_count();
    let split = vertex_color_split(g, palettes, a, eps, mode, &stream.derive("lfd-split", 0), ledger)?;
    let large = split.induced(g, palettes, false);
    let small = split.induced(g, palettes, true);
    let main_eps = match mode {
        SplitMode::Stochastic => eps.scaled(MAIN_EPS_DIVISOR),
        SplitMode::Independent => Epsilon::new(eps.get() * eps.get() / MAIN_EPS_DIVISOR)?,
    };
    let a_star = pseudo_arboricity(g).0.value;
    let strategy = CutStrategy::auto(main_eps, a, n, false);
    let params = AlgorithmParams::new(g, main_eps, a, a_star, strategy);
    let run = forest_decomposition_main(g, &large, &params, strategy, &stream.derive("lfd-main", 0), ledger)?;

    let shortened = reduce_forest_diameter(g, &run.coloring, a, main_eps, &stream.derive("lfd-diameter", 0), ledger)?;
    let leftover_edges = run.leftover_edges();
    let decolored_edges: Vec<EdgeId> = g.edge_ids().filter(|&e| shortened.moved.get(e).is_some()).collect();
    let mut coloring = shortened.kept;
    let mut side_edges: Vec<EdgeId> = leftover_edges.iter().chain(&decolored_edges).copied().collect();
    side_edges.sort_unstable();
    side_edges.dedup();
    if !side_edges.is_empty() {
        let (rest, rest_to_g) = g.edge_subgraph(&side_edges);
        let side = lsfd_4eps(&rest, Epsilon::new(1.0)?, None, &small.restrict(&rest_to_g), &stream.derive("lfd-side", 0), ledger)?;
        for (i, &e) in rest_to_g.iter().enumerate() {
            coloring.set(e, side.get(i).expect("side decomposition is total"));
        }
    }
    let report = check_forest_decomposition(g, &coloring, Some(palettes));
    if !report.ok {
        return Err(Error::Precondition(format!("merged list decomposition has {} violations", report.violations.len())));
    }
    Ok(LfdRun {
        coloring,
        side_edges,
        leftover_edges,
        decolored_edges,
        split_attempts: split.attempts,
        retries: run.retries,
        strategy,
        report,
    })
}

/// Colors whose class touches one vertex from both edge sets.
pub fn crossing_colors(g: &MultiGraph, coloring: &PartialColoring, side_edges: &[EdgeId]) -> Vec<Color> {
    let mut seen: BTreeMap<(Vertex, Color), [bool; 2]> = BTreeMap::new();
    for e in g.edge_ids() {
        let Some(c) = coloring.get(e) else { continue };
        let part = usize::from(side_edges.binary_search(&e).is_ok());
        let (u, v) = g.endpoints(e);
        for x in [u, v] {
            seen.entry((x, c)).or_default()[part] = true;
        }
    }
    let mut out: Vec<Color> = seen.into_iter().filter(|(_, p)| p[0] && p[1]).map(|((_, c), _)| c).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Palette size the combination targets.
pub fn target_colors(a: usize, eps: Epsilon) -> usize {
    ceil_tol((1.0 + eps.get()) * a as f64)
}
