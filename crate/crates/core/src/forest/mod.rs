//! Distributed list forest decomposition: clusters of a network
//! decomposition of a high power of the graph are processed class by class;
//! each cluster first cuts monochromatic paths leaving its ball and then
//! colors its incident edges by augmentation.

pub mod combine;
pub mod cut;
pub mod split;

pub use combine::{combine_fd, combine_fd_with, combine_lfd, crossing_colors, target_colors, FdRun, LfdRun, SplitMode};
pub use cut::{cut_diameter, cut_random_depth, cut_random_outedge, prune_by_depth, CutScope, CutState, Removal};
pub use split::{vertex_color_split, VertexColorSplit};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::augment::{color_edge_set, default_radius_cap};
use crate::basic::LENGTH_FACTOR;
use crate::coloring::{PaletteSet, PartialColoring};
use crate::error::{Error, Result};
use crate::graph::{bfs_distances, EdgeId, MultiGraph, Subgraph, Vertex, UNREACHED};
use crate::netdecomp::{network_decomposition, NdConfig};
use crate::params::{ceil_tol, log2_ceil, Epsilon};
use crate::runtime::{RandomStream, RoundLedger};

/// Attempts before a run that keeps failing the good check gives up.
pub const MAX_ATTEMPTS: usize = 5;

/// Multiplier `T` in the depth strategy's radius `ceil(80 T / eps)`.
pub const DEPTH_RADIUS_FACTOR: f64 = 80.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Radius constant of the out-edge strategy.
    pub radius: f64,
    /// Inner radius `R' = ceil(inner * log2 n / eps)`.
    pub inner: f64,
    /// Removal probability constant of the out-edge strategy.
    pub probability: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Self { radius: 4.0, inner: 4.0, probability: 4.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CutStrategy {
    Diameter,
    RandomDepth,
    RandomOutEdge,
    /// Removes nothing; the good check then decides.
    NoOp,
}

impl CutStrategy {
    /// Depth cuts for plain palettes and the diameter cut for lists once
    /// `eps a >= log2 n`; otherwise out-edge removal.
    pub fn auto(eps: Epsilon, a: usize, n: usize, uniform_palettes: bool) -> Self {
        if eps.get() * a as f64 >= log2_ceil(n) as f64 {
            if uniform_palettes {
                Self::RandomDepth
            } else {
                Self::Diameter
            }
        } else {
            Self::RandomOutEdge
        }
    }
}

impl std::fmt::Display for CutStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Self::Diameter => "diameter",
            Self::RandomDepth => "random-depth",
            Self::RandomOutEdge => "random-out-edge",
            Self::NoOp => "no-op",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmParams {
    pub eps: Epsilon,
    pub a_bound: usize,
    pub a_star_bound: usize,
    /// `R`: how far past the inner ball cuts must reach.
    pub radius: usize,
    /// `R'`: radius of the ball recolored around each cluster.
    pub inner_radius: usize,
    pub calibration: Calibration,
    pub eta: f64,
    pub p: f64,
    /// `T`: class cap of the network decomposition.
    pub class_count: usize,
}

impl AlgorithmParams {
    pub fn new(g: &MultiGraph, eps: Epsilon, a_bound: usize, a_star_bound: usize, strategy: CutStrategy) -> Self {
        Self::with_calibration(g, eps, a_bound, a_star_bound, strategy, Calibration::default())
    }

    pub fn with_calibration(
        g: &MultiGraph,
        eps: Epsilon,
        a_bound: usize,
        a_star_bound: usize,
        strategy: CutStrategy,
        calibration: Calibration,
    ) -> Self {
        let n = g.vertex_count();
        let log_n = log2_ceil(n) as f64;
        let e = eps.get();
        let class_count = NdConfig::default().class_cap(n);
        let inner_radius = ceil_tol(calibration.inner * log_n / e).max(1);
        let mut params = Self { eps, a_bound, a_star_bound, radius: 0, inner_radius, calibration, eta: 0.5, p: 1.0, class_count };
        params.radius = match strategy {
            CutStrategy::Diameter => ceil_tol(LENGTH_FACTOR * log_n / params.diameter_eps().get()) + 1,
            CutStrategy::RandomDepth | CutStrategy::NoOp => ceil_tol(DEPTH_RADIUS_FACTOR * class_count as f64 / e),
            CutStrategy::RandomOutEdge => {
                let a = a_bound.max(1) as f64;
                let t = params.load_cap() as f64;
                let log_delta = log2_ceil(g.max_degree().max(2)) as f64;
                let radius = if e * a <= log_delta {
                    params.eta = (t / (2.0 * log_delta)).min(0.5);
                    let spread = (g.max_degree().max(2) as f64).powf((2.0 + 4.0 * params.eta) / t);
                    calibration.radius * spread * log_delta * log_n * log_n / (a * e * e)
                } else {
                    calibration.radius * log_n * log_n / e
                };
                let radius = ceil_tol(radius).max(2);
                params.p = (calibration.probability * a * log_n / (params.eta * radius as f64)).min(1.0);
                radius
            }
        }
        .max(2);
        params
    }

    /// Overrides both radii; the probability is kept.
    pub fn with_radii(mut self, radius: usize, inner_radius: usize) -> Self {
        self.radius = radius.max(2);
        self.inner_radius = inner_radius.max(1);
        self
    }

    /// `ceil(eps a)`: the per-vertex removal cap of the out-edge strategy.
    pub fn load_cap(&self) -> usize {
        ceil_tol(self.eps.get() * self.a_bound as f64).max(1)
    }

    /// `N = floor(R / 2)`.
    pub fn depth_modulus(&self) -> usize {
        (self.radius / 2).max(1)
    }

    /// `eps / (2T)`.
    pub fn diameter_eps(&self) -> Epsilon {
        self.eps.scaled(2.0 * self.class_count as f64)
    }

    /// Palette size the run needs: `ceil((1 + eps) a)`.
    pub fn palette_size(&self) -> usize {
        ceil_tol((1.0 + self.eps.get()) * self.a_bound as f64)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainRun {
    pub coloring: PartialColoring,
    /// Removed edges with the endpoint each is charged to, by edge id.
    pub leftover: Vec<Removal>,
    pub good: bool,
    pub retries: usize,
    pub strategy: CutStrategy,
    pub params: AlgorithmParams,
}

impl MainRun {
    pub fn leftover_edges(&self) -> Vec<EdgeId> {
        self.leftover.iter().map(|r| r.0).collect()
    }

    /// Largest number of leftover edges charged to one vertex.
    pub fn max_charge(&self) -> usize {
        let mut count: BTreeMap<Vertex, usize> = BTreeMap::new();
        for &(_, v) in &self.leftover {
            *count.entry(v).or_default() += 1;
        }
        count.values().copied().max().unwrap_or(0)
    }
}

struct Attempt {
    coloring: PartialColoring,
    leftover: Vec<Removal>,
    bad_cluster: Option<usize>,
}

fn attempt(
    g: &MultiGraph,
    palettes: &PaletteSet,
    params: &AlgorithmParams,
    strategy: CutStrategy,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<Attempt> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut coloring = PartialColoring::new(m);
    let mut removed = vec![false; m];
    let mut leftover = Vec::new();
    if m == 0 {
        return Ok(Attempt { coloring, leftover, bad_cluster: None });
    }
    let reach = params.radius + params.inner_radius;
    let nd = network_decomposition(g, 2 * reach, &stream.derive("fd-nd", 0), ledger)?;
    let config = NdConfig::default();
    ledger.charge("fd/classes", (reach + 2 * reach * config.diameter_cap(n)) as u64, config.class_cap(n) as u64);
    let mut state = match strategy {
        CutStrategy::RandomOutEdge => Some(CutState::initialize(g, params, ledger)?),
        _ => None,
    };
    let radius_cap = default_radius_cap(n, params.eps).min(params.inner_radius).max(1);
    let clusters = nd.clusters();
    let mut scratch = RoundLedger::new();
    for class in nd.clusters_by_class() {
        for c in class {
            let members = &clusters[c];
            let cluster_stream = stream.derive("cluster", c as u64);
            let dist = bfs_distances(g, members, reach);
            let inner: Vec<bool> = dist.iter().map(|&d| d <= params.inner_radius).collect();
            let outer: Vec<bool> = dist.iter().map(|&d| d != UNREACHED).collect();
            let scope = CutScope { g, coloring: &coloring, removed: &removed, inner: &inner, outer: &outer };
            let cut = match strategy {
                CutStrategy::Diameter => cut_diameter(&scope, params, &cluster_stream, &mut scratch)?,
                CutStrategy::RandomDepth => cut_random_depth(&scope, params, &cluster_stream),
                CutStrategy::RandomOutEdge => {
                    cut_random_outedge(&scope, params, &cluster_stream, state.as_mut().expect("initialized"))
                }
                CutStrategy::NoOp => Vec::new(),
            };
            for &(e, v) in &cut {
                removed[e] = true;
                coloring.clear(e);
                leftover.push((e, v));
            }
            let scope = CutScope { g, coloring: &coloring, removed: &removed, inner: &inner, outer: &outer };
            if !scope.is_good() {
                return Ok(Attempt { coloring, leftover, bad_cluster: Some(c) });
            }

            let view = Subgraph::induced(g, &outer);
            let keep: Vec<EdgeId> = (0..view.edge_map.len()).filter(|&i| !removed[view.edge_map[i]]).collect();
            let (local, local_to_view) = view.graph.edge_subgraph(&keep);
            let to_g: Vec<EdgeId> = local_to_view.iter().map(|&i| view.edge_map[i]).collect();
            let mut in_cluster = vec![false; n];
            for &v in members {
                in_cluster[v] = true;
            }
            let mut local_coloring = PartialColoring::new(to_g.len());
            let mut targets = Vec::new();
            for (i, &e) in to_g.iter().enumerate() {
                local_coloring.assign(i, coloring.get(e));
                let (u, v) = g.endpoints(e);
                if coloring.get(e).is_none() && (in_cluster[u] || in_cluster[v]) {
                    targets.push(i);
                }
            }
            let local_palettes = palettes.restrict(&to_g);
            color_edge_set(&local, &mut local_coloring, &local_palettes, &targets, radius_cap, &mut scratch)?;
            for (i, &e) in to_g.iter().enumerate() {
                coloring.assign(e, local_coloring.get(i));
            }
        }
    }
    leftover.sort_unstable();
    Ok(Attempt { coloring, leftover, bad_cluster: None })
}

/// Colors every edge that no cut removes, retrying with a fresh stream when
/// a cut leaves a monochromatic path out of its ball.
pub fn forest_decomposition_main(
    g: &MultiGraph,
    palettes: &PaletteSet,
    params: &AlgorithmParams,
    strategy: CutStrategy,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<MainRun> {
    palettes.require_size(params.palette_size())?;
    let mut last_bad = 0;
    for retry in 0..MAX_ATTEMPTS {
        let run = attempt(g, palettes, params, strategy, &stream.derive("fd-attempt", retry as u64), ledger)?;
        match run.bad_cluster {
            None => {
                return Ok(MainRun {
                    coloring: run.coloring,
                    leftover: run.leftover,
                    good: true,
                    retries: retry,
                    strategy,
                    params: params.clone(),
                })
            }
            Some(c) => last_bad = c,
        }
    }
    Err(Error::NotGood { cluster: last_bad, attempts: MAX_ATTEMPTS })
}
