//! Star-forest decomposition of simple graphs: every vertex picks the colors
//! it is a leaf for, then matches those colors to out-neighbors that are
//! centers for them.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::basic::star_forest_3t;
use crate::coloring::{Color, PaletteSet, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{arboricity_upper_bound, EdgeId, MultiGraph, Orientation, Vertex};
use crate::orientation::low_outdegree_orientation;
use crate::params::{ceil_tol, floor_tol, log2_ceil, Epsilon};
use crate::runtime::{RandomStream, RoundLedger};

use super::bipartite::{local_graph, sfd_from_matchings, sorted_out_edges, CenterAssignment, LocalBipartite};
use super::lll::{distributed_lll, LllInstance};

/// Resampling rounds allowed per `ceil(log2 n)`.
pub const CENTER_LLL_FACTOR: usize = 16;
/// `a eps >= 100 (sqrt(ln Δ) + ln a)` for uniform centers.
pub const SFD_CONDITION_FACTOR: f64 = 100.0;
/// `a eps >= 10^6 ln Δ` for list centers.
pub const LSFD_CONDITION_FACTOR: f64 = 1e6;
pub const LSFD_MAX_EPS: f64 = 1e-6;
/// List centers need palettes of size `a (1 + 200 eps)`.
pub const LSFD_PALETTE_FACTOR: f64 = 200.0;
/// Slack of the H-partition that colors the leftover.
pub const LEFTOVER_EPS: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarMode {
    Sfd,
    Lsfd,
}

/// `Strict` enforces the density conditions under which random centers
/// succeed with high probability. `Relaxed` keeps only what the construction
/// itself needs and relies on resampling plus verification of the output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Thresholds {
    #[default]
    Strict,
    Relaxed,
}

/// Which per-vertex matching guarantee a run met. `Strong` leaves at most
/// `2 a eps` out-edges unmatched; `Weak` only guarantees matchings of size
/// `a (1 - eps)`, i.e. at most `t - ceil(a (1 - eps))` unmatched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchingBound {
    Strong,
    Weak,
}

fn ln_max_degree(g: &MultiGraph) -> f64 {
    (g.max_degree().max(1) as f64).ln()
}

fn check_sfd_conditions(g: &MultiGraph, a: usize, eps: Epsilon, t: usize, thresholds: Thresholds) -> Result<()> {
    if t <= a {
        return Err(Error::Precondition(format!("{t} colors leave no slack over arboricity {a}")));
    }
    if thresholds == Thresholds::Strict {
        let need = SFD_CONDITION_FACTOR * (ln_max_degree(g).sqrt() + (a.max(1) as f64).ln());
        if (a as f64) * eps.get() < need {
            return Err(Error::Precondition(format!("a eps = {} is below {need:.1}", a as f64 * eps.get())));
        }
    }
    Ok(())
}

fn check_lsfd_conditions(
    g: &MultiGraph,
    a: usize,
    eps: Epsilon,
    t: usize,
    palettes: &PaletteSet,
    thresholds: Thresholds,
) -> Result<()> {
    match thresholds {
        Thresholds::Relaxed => palettes.require_size(t),
        Thresholds::Strict => {
            let e = eps.get();
            if e > LSFD_MAX_EPS {
                return Err(Error::Precondition(format!("eps = {e} is above {LSFD_MAX_EPS}")));
            }
            let need = LSFD_CONDITION_FACTOR * ln_max_degree(g);
            if a as f64 * e < need {
                return Err(Error::Precondition(format!("a eps = {} is below {need:.1}", a as f64 * e)));
            }
            palettes.require_size(ceil_tol(a as f64 * (1.0 + LSFD_PALETTE_FACTOR * e)))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Draw {
    /// A uniform subset of `0..universe` of the given size.
    Subset { size: usize },
    /// Each color independently with the given probability.
    Independent { keep: f64 },
}

impl Draw {
    fn sample(self, universe: usize, rng: &mut ChaCha8Rng) -> Vec<Color> {
        let mut colors: Vec<Color> = match self {
            Draw::Subset { size } => sample(rng, universe, size).into_iter().map(|c| c as Color).collect(),
            Draw::Independent { keep } => (0..universe as Color).filter(|_| rng.random_bool(keep)).collect(),
        };
        colors.sort_unstable();
        colors
    }
}

struct CenterInstance<'a> {
    palettes: &'a PaletteSet,
    out: Vec<Vec<(Vertex, EdgeId)>>,
    t: usize,
    allowed: usize,
    draw: Draw,
    centers: CenterAssignment,
}

impl CenterInstance<'_> {
    fn graph(&self, v: Vertex) -> LocalBipartite {
        local_graph(self.out[v].clone(), &self.centers, self.palettes, self.t, v)
    }
}

impl LllInstance for CenterInstance<'_> {
    fn event_count(&self) -> usize {
        self.out.len()
    }
    fn violated(&self, v: usize) -> bool {
        self.graph(v).deficit() > self.allowed
    }
    fn variables(&self, v: usize) -> Vec<usize> {
        let mut vars: Vec<usize> = self.out[v].iter().map(|&(u, _)| u).collect();
        vars.push(v);
        vars.sort_unstable();
        vars
    }
    fn resample(&mut self, v: usize, rng: &mut ChaCha8Rng) {
        self.centers.leaf_colors[v] = self.draw.sample(self.centers.universe, rng);
    }
}

/// An accepted center assignment with its resampling record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledCenters {
    pub centers: CenterAssignment,
    pub graphs: Vec<LocalBipartite>,
    pub lll_rounds: usize,
}

#[allow(clippy::too_many_arguments)]
fn sample_centers(
    g: &MultiGraph,
    orientation: &Orientation,
    palettes: &PaletteSet,
    universe: usize,
    t: usize,
    allowed: usize,
    draw: Draw,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<SampledCenters> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let out: Vec<Vec<(Vertex, EdgeId)>> = g.vertices().map(|v| sorted_out_edges(g, orientation, v)).collect();
    if let Some(v) = g.vertices().find(|&v| out[v].len() > t) {
        return Err(Error::Precondition(format!("vertex {v} has outdegree {} above {t}", out[v].len())));
    }
    let leaf_colors = g.vertices().map(|v| draw.sample(universe, &mut stream.derive("centers", v as u64).rng())).collect();
    let mut instance = CenterInstance {
        palettes,
        out,
        t,
        allowed,
        draw,
        centers: CenterAssignment { universe, leaf_colors },
    };
    let budget = CENTER_LLL_FACTOR * log2_ceil(g.vertex_count());
    let outcome = distributed_lll(&mut instance, budget, 2, &stream.derive("centers-lll", 0), ledger)?;
    let graphs = g.vertices().map(|v| instance.graph(v)).collect();
    Ok(SampledCenters { centers: instance.centers, graphs, lll_rounds: outcome.rounds })
}

/// Uniform `a`-subsets of `0..t` until every vertex leaves at most
/// `allowed` out-edges unmatched.
#[allow(clippy::too_many_arguments)]
pub fn sample_centers_sfd(
    g: &MultiGraph,
    orientation: &Orientation,
    a: usize,
    t: usize,
    allowed: usize,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<SampledCenters> {
    let palettes = PaletteSet::uniform(g.edge_count(), t);
    sample_centers(g, orientation, &palettes, t, t, allowed, Draw::Subset { size: a.min(t) }, stream, ledger)
}

/// Every color kept with probability `1 - eps` until every out-edge is
/// matched.
pub fn sample_centers_lsfd(
    g: &MultiGraph,
    orientation: &Orientation,
    eps: Epsilon,
    t: usize,
    palettes: &PaletteSet,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<SampledCenters> {
    let universe = palettes.universe_bound() as usize;
    let draw = Draw::Independent { keep: 1.0 - eps.get() };
    sample_centers(g, orientation, palettes, universe, t, 0, draw, stream, ledger)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarRun {
    pub coloring: PartialColoring,
    pub mode: StarMode,
    pub a_bound: usize,
    /// Orientation outdegree cap and number of main colors.
    pub t: usize,
    pub allowed_deficit: usize,
    pub max_deficit: usize,
    pub bound_met: MatchingBound,
    pub centers: CenterAssignment,
    pub lll_rounds: usize,
    pub leftover_edges: Vec<EdgeId>,
    /// Guaranteed color count: `t` plus the star forests of the leftover.
    pub color_bound: usize,
    /// `c` with `color_bound = (1 + c eps) a`.
    pub color_factor: f64,
}

/// Star forests for a simple graph. In `Sfd` mode the leftover of unmatched
/// out-edges is split into `3 floor(2.01 d)` extra star forests, `d` being
/// the largest deficit; in `Lsfd` mode every out-edge is matched and colors
/// come from `palettes`.
pub fn star_forest_decomposition(
    g: &MultiGraph,
    eps: Epsilon,
    mode: StarMode,
    palettes: Option<&PaletteSet>,
    thresholds: Thresholds,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<StarRun> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    let a = arboricity_upper_bound(g).max(1);
    let e = eps.get();
    let t = ceil_tol((1.0 + e) * a as f64);
    let uniform;
    let palettes = match (mode, palettes) {
        (StarMode::Sfd, None) => {
            check_sfd_conditions(g, a, eps, t, thresholds)?;
            uniform = PaletteSet::uniform(g.edge_count(), t);
            &uniform
        }
        (StarMode::Sfd, Some(_)) => {
            return Err(Error::InvalidParameter("palettes are only used in list mode".into()));
        }
        (StarMode::Lsfd, Some(p)) => {
            check_lsfd_conditions(g, a, eps, t, p, thresholds)?;
            p
        }
        (StarMode::Lsfd, None) => return Err(Error::InvalidParameter("list mode needs palettes".into())),
    };
    let run = low_outdegree_orientation(g, eps, None, &stream.derive("star-orient", 0), ledger)?;
    let strong = floor_tol(2.0 * a as f64 * e);
    let (allowed, sampled) = match mode {
        StarMode::Sfd => {
            let allowed = t - ceil_tol(a as f64 * (1.0 - e)).min(t);
            (allowed, sample_centers_sfd(g, &run.orientation, a, t, allowed, &stream.derive("star-centers", 0), ledger)?)
        }
        StarMode::Lsfd => {
            (0, sample_centers_lsfd(g, &run.orientation, eps, t, palettes, &stream.derive("star-centers", 0), ledger)?)
        }
    };
    let split = sfd_from_matchings(g, &sampled.graphs, allowed)?;
    ledger.charge("star/match", 1, 1);
    let max_deficit = split.max_deficit();
    let mut coloring = split.coloring;
    let mut color_bound = match mode {
        StarMode::Sfd => t,
        StarMode::Lsfd => palettes.universe_bound() as usize,
    };
    if !split.leftover.is_empty() {
        let (sub, map) = g.edge_subgraph(&split.leftover);
        let extra = star_forest_3t(&sub, Epsilon::new(LEFTOVER_EPS)?, Some(max_deficit), ledger)?;
        for (i, &orig) in map.iter().enumerate() {
            coloring.set(orig, t as Color + extra.get(i).expect("leftover is fully colored"));
        }
        color_bound += 3 * floor_tol((2.0 + LEFTOVER_EPS) * max_deficit as f64);
    }
    Ok(StarRun {
        coloring,
        mode,
        a_bound: a,
        t,
        allowed_deficit: allowed,
        max_deficit,
        bound_met: if max_deficit <= strong { MatchingBound::Strong } else { MatchingBound::Weak },
        centers: sampled.centers,
        lll_rounds: sampled.lll_rounds,
        leftover_edges: split.leftover,
        color_bound,
        color_factor: (color_bound as f64 / a as f64 - 1.0) / e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family, GeneratorSpec};
    use crate::verify::check_star_forest;

    fn eps(x: f64) -> Epsilon {
        Epsilon::new(x).unwrap()
    }

    fn relaxed_sfd(g: &MultiGraph, e: f64, seed: u64) -> StarRun {
        star_forest_decomposition(g, eps(e), StarMode::Sfd, None, Thresholds::Relaxed, &RandomStream::new(seed), &mut RoundLedger::new())
            .unwrap()
    }

    fn random_lists(m: usize, size: usize, universe: usize, seed: u64) -> PaletteSet {
        let mut rng = RandomStream::new(seed).derive("lists", 0).rng();
        PaletteSet::from_lists((0..m).map(|_| sample(&mut rng, universe, size).into_iter().map(|c| c as Color).collect()).collect())
            .unwrap()
    }

    #[test]
    fn tree_sfd() {
        let g = MultiGraph::from_edges(10, (1..10).map(|i| ((i - 1) / 2, i))).unwrap();
        let run = relaxed_sfd(&g, 1.0, 3);
        assert_eq!(run.a_bound, 1);
        assert_eq!(run.t, 2);
        assert!(check_star_forest(&g, &run.coloring).ok);
        assert!(run.coloring.is_total());
        assert!(run.coloring.color_count() <= run.color_bound);
    }

    #[test]
    fn gnp_sfd_within_bound() {
        let g = generate(&GeneratorSpec::new(Family::Gnp { n: 150, p: 0.12 }, 4)).unwrap();
        let run = relaxed_sfd(&g, 0.5, 8);
        assert!(check_star_forest(&g, &run.coloring).ok);
        assert!(run.coloring.is_total());
        assert!(run.max_deficit <= run.allowed_deficit);
        assert!(run.coloring.color_count() <= run.color_bound);
        let bound = (1.0 + run.color_factor * 0.5) * run.a_bound as f64;
        assert!(run.coloring.color_count() as f64 <= bound + 1e-9);
    }

    #[test]
    fn multigraph_rejected() {
        let g = MultiGraph::from_edges(2, [(0, 1), (0, 1)]).unwrap();
        let err = star_forest_decomposition(&g, eps(0.5), StarMode::Sfd, None, Thresholds::Relaxed, &RandomStream::new(0), &mut RoundLedger::new());
        assert_eq!(err, Err(Error::NotSimple));
    }

    #[test]
    fn strict_conditions_reject_small_graphs() {
        let g = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let err = star_forest_decomposition(&g, eps(0.5), StarMode::Sfd, None, Thresholds::Strict, &RandomStream::new(0), &mut RoundLedger::new());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn no_slack_rejected() {
        let g = MultiGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let err = star_forest_decomposition(&g, eps(1e-12), StarMode::Sfd, None, Thresholds::Relaxed, &RandomStream::new(0), &mut RoundLedger::new());
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn isolated_vertices_accept_any_centers() {
        let g = MultiGraph::new(5);
        let o = Orientation::toward_higher(&g);
        let sampled = sample_centers_sfd(&g, &o, 2, 3, 0, &RandomStream::new(1), &mut RoundLedger::new()).unwrap();
        assert_eq!(sampled.lll_rounds, 0);
        assert!(sampled.centers.leaf_colors.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn single_vertex_lsfd() {
        let g = MultiGraph::new(1);
        let o = Orientation::toward_higher(&g);
        let pal = PaletteSet::uniform(0, 4);
        let sampled = sample_centers_lsfd(&g, &o, eps(0.1), 2, &pal, &RandomStream::new(0), &mut RoundLedger::new()).unwrap();
        assert_eq!(sampled.lll_rounds, 0);
    }

    #[test]
    fn lsfd_matches_every_edge() {
        let g = generate(&GeneratorSpec::new(Family::Gnp { n: 60, p: 0.08 }, 2)).unwrap();
        let pal = random_lists(g.edge_count(), 16, 24, 5);
        let run = star_forest_decomposition(&g, eps(0.3), StarMode::Lsfd, Some(&pal), Thresholds::Relaxed, &RandomStream::new(6), &mut RoundLedger::new())
            .unwrap();
        assert!(run.leftover_edges.is_empty());
        assert_eq!(run.max_deficit, 0);
        assert!(run.coloring.is_total());
        assert!(check_star_forest(&g, &run.coloring).ok);
        assert!(g.edge_ids().all(|e| pal.contains(e, run.coloring.get(e).unwrap())));
    }

    #[test]
    fn lsfd_needs_lists() {
        let g = MultiGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let err = star_forest_decomposition(&g, eps(0.3), StarMode::Lsfd, None, Thresholds::Relaxed, &RandomStream::new(0), &mut RoundLedger::new());
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let g = generate(&GeneratorSpec::new(Family::Gnp { n: 80, p: 0.1 }, 1)).unwrap();
        assert_eq!(relaxed_sfd(&g, 0.5, 2), relaxed_sfd(&g, 0.5, 2));
    }
}
