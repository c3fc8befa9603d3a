//! Splitting the color space at every vertex into a large side and a small
//! side so that two list decompositions can be merged.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coloring::{Color, PaletteSet};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph};
use crate::netdecomp::stochastic_decomposition;
use crate::params::{ceil_tol, log2_ceil, Epsilon};
use crate::runtime::{RandomStream, RoundLedger};
use crate::star::lll::{distributed_lll, LllInstance};

/// Redraws of a stochastic split before giving up.
pub const SPLIT_ATTEMPTS: usize = 20;

/// Resampling rounds allowed per `ceil(log2 n)` in the independent mode.
pub const SPLIT_LLL_FACTOR: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitMode {
    /// Shared bits per component of a per-color stochastic decomposition.
    Stochastic,
    /// One bit per vertex and color, repaired by resampling.
    Independent,
}

/// `side[v * universe + c]` is true when color `c` sits on side 1 at `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexColorSplit {
    pub universe: usize,
    pub side: Vec<bool>,
    pub attempts: usize,
}

impl VertexColorSplit {
    pub fn side_of(&self, v: usize, c: Color) -> bool {
        self.side[v * self.universe + c as usize]
    }

    /// `Q_i(uv)`: colors of `Q(uv)` on side `i` at both endpoints.
    pub fn induced_list(&self, g: &MultiGraph, palettes: &PaletteSet, e: EdgeId, one: bool) -> Vec<Color> {
        let (u, v) = g.endpoints(e);
        palettes
            .palette(e)
            .iter()
            .copied()
            .filter(|&c| self.side_of(u, c) == one && self.side_of(v, c) == one)
            .collect()
    }

    pub fn induced(&self, g: &MultiGraph, palettes: &PaletteSet, one: bool) -> PaletteSet {
        PaletteSet::from_lists(g.edge_ids().map(|e| self.induced_list(g, palettes, e, one)).collect())
            .expect("sublists of valid palettes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Targets {
    large: f64,
    small: f64,
}

impl Targets {
    fn new(a: usize, eps: f64, mode: SplitMode) -> Self {
        let a = a as f64;
        let small = match mode {
            SplitMode::Stochastic => eps * a / 20.0,
            SplitMode::Independent => eps * eps * a / 200.0,
        };
        Self { large: (1.0 + eps / 2.0) * a, small }
    }

    fn met(&self, large: usize, small: usize) -> bool {
        large as f64 >= self.large - 1e-9 && small as f64 >= self.small - 1e-9
    }
}

fn side_counts(g: &MultiGraph, palettes: &PaletteSet, universe: usize, side: &[bool], e: EdgeId) -> (usize, usize) {
    let (u, v) = g.endpoints(e);
    let (mut zero, mut one) = (0, 0);
    for &c in palettes.palette(e) {
        let (su, sv) = (side[u * universe + c as usize], side[v * universe + c as usize]);
        if !su && !sv {
            zero += 1;
        } else if su && sv {
            one += 1;
        }
    }
    (zero, one)
}

struct SplitInstance<'a> {
    g: &'a MultiGraph,
    palettes: &'a PaletteSet,
    universe: usize,
    side: Vec<bool>,
    bias: f64,
    targets: Targets,
}

impl LllInstance for SplitInstance<'_> {
    fn event_count(&self) -> usize {
        self.g.edge_count()
    }
    fn violated(&self, event: usize) -> bool {
        let (zero, one) = side_counts(self.g, self.palettes, self.universe, &self.side, event);
        !self.targets.met(zero, one)
    }
    fn variables(&self, event: usize) -> Vec<usize> {
        let (u, v) = self.g.endpoints(event);
        let mut vars: Vec<usize> = self.palettes.palette(event).iter().flat_map(|&c| [u * self.universe + c as usize, v * self.universe + c as usize]).collect();
        vars.sort_unstable();
        vars
    }
    fn resample(&mut self, variable: usize, rng: &mut ChaCha8Rng) {
        self.side[variable] = rng.random_bool(self.bias);
    }
}

/// Puts each color on side 1 with probability `eps / 10` and checks that
/// every edge keeps `(1 + eps/2) a` colors on side 0 and `eps a / 20`
/// (stochastic) or `eps^2 a / 200` (independent) on side 1.
pub fn vertex_color_split(
    g: &MultiGraph,
    palettes: &PaletteSet,
    a: usize,
    eps: Epsilon,
    mode: SplitMode,
    stream: &RandomStream,
    ledger: &mut RoundLedger,
) -> Result<VertexColorSplit> {
    let e = eps.get();
    palettes.require_size(ceil_tol((1.0 + e) * a as f64))?;
    let n = g.vertex_count();
    let universe = palettes.universe_bound() as usize;
    let bias = e / 10.0;
    let targets = Targets::new(a, e, mode);
    let all_met = |side: &[bool]| {
        g.edge_ids().all(|edge| {
            let (zero, one) = side_counts(g, palettes, universe, side, edge);
            targets.met(zero, one)
        })
    };
    match mode {
        SplitMode::Stochastic => {
            let mut used = vec![false; universe];
            for edge in g.edge_ids() {
                for &c in palettes.palette(edge) {
                    used[c as usize] = true;
                }
            }
            for attempt in 0..SPLIT_ATTEMPTS {
                let round = stream.derive("split-attempt", attempt as u64);
                let mut side = vec![false; n * universe];
                let mut parts = Vec::new();
                for c in (0..universe).filter(|&c| used[c]) {
                    let mut part = RoundLedger::new();
                    let sd = stochastic_decomposition(g, bias, &round.derive("split-sd", c as u64), &mut part)?;
                    parts.push(part);
                    let bits = round.derive("split-bit", c as u64);
                    let components = sd.component_of.iter().copied().max().map_or(0, |x| x + 1);
                    let draws: Vec<bool> = (0..components).map(|u| bits.derive("component", u as u64).rng().random_bool(bias)).collect();
                    for v in 0..n {
                        side[v * universe + c] = draws[sd.component_of[v]];
                    }
                }
                ledger.merge(RoundLedger::parallel(parts));
                if all_met(&side) {
                    return Ok(VertexColorSplit { universe, side, attempts: attempt + 1 });
                }
            }
            Err(Error::SplitFailed { attempts: SPLIT_ATTEMPTS })
        }
        SplitMode::Independent => {
            let mut side = vec![false; n * universe];
            for (i, bit) in side.iter_mut().enumerate() {
                *bit = stream.derive("split-bit", i as u64).rng().random_bool(bias);
            }
            let mut instance = SplitInstance { g, palettes, universe, side, bias, targets };
            let budget = SPLIT_LLL_FACTOR * log2_ceil(n);
            match distributed_lll(&mut instance, budget, 1, &stream.derive("split-lll", 0), ledger) {
                Ok(outcome) => Ok(VertexColorSplit { universe, side: instance.side, attempts: outcome.rounds + 1 }),
                Err(Error::LllBudget { rounds, .. }) => Err(Error::SplitFailed { attempts: rounds }),
                Err(other) => Err(other),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Family, GeneratorSpec};

    fn synthetic(seed: u64, n: usize, size: usize, universe: usize) -> (MultiGraph, PaletteSet) {
        let g = generate(&GeneratorSpec::new(Family::RandomForestUnion { n, k: 2 }, seed)).unwrap();
        let mut rng = RandomStream::new(seed).derive("palettes", 0).rng();
        let lists = g
            .edge_ids()
            .map(|_| rand::seq::index::sample(&mut rng, universe, size).into_iter().map(|c| c as Color).collect())
            .collect();
        (g, PaletteSet::from_lists(lists).unwrap())
    }

    #[test]
    fn zero_eps_rejected() {
        assert!(Epsilon::new(0.0).is_err());
    }

    #[test]
    fn stochastic_split_meets_bounds() {
        let (g, pal) = synthetic(5, 500, 600, 900);
        let split = vertex_color_split(&g, &pal, 400, Epsilon::new(0.5).unwrap(), SplitMode::Stochastic, &RandomStream::new(2), &mut RoundLedger::new()).unwrap();
        let q0 = split.induced(&g, &pal, false);
        let q1 = split.induced(&g, &pal, true);
        for e in g.edge_ids() {
            assert!(q0.palette(e).len() as f64 >= 1.25 * 400.0);
            assert!(q1.palette(e).len() as f64 >= 0.5 * 400.0 / 20.0);
            assert!(q0.palette(e).iter().all(|c| !q1.contains(e, *c)));
            assert!(q0.palette(e).iter().chain(q1.palette(e)).all(|c| pal.contains(e, *c)));
        }
    }

    #[test]
    fn independent_split_meets_bounds() {
        let (g, pal) = synthetic(9, 60, 1600, 1800);
        let split = vertex_color_split(&g, &pal, 800, Epsilon::new(1.0).unwrap(), SplitMode::Independent, &RandomStream::new(4), &mut RoundLedger::new()).unwrap();
        for e in g.edge_ids() {
            let zero = split.induced_list(&g, &pal, e, false).len() as f64;
            let one = split.induced_list(&g, &pal, e, true).len() as f64;
            assert!(zero >= 1.5 * 800.0 && one >= 800.0 / 200.0);
        }
    }

    #[test]
    fn small_palettes_rejected() {
        let (g, pal) = synthetic(1, 20, 10, 30);
        let err = vertex_color_split(&g, &pal, 10, Epsilon::new(0.5).unwrap(), SplitMode::Stochastic, &RandomStream::new(0), &mut RoundLedger::new());
        assert!(matches!(err, Err(Error::PaletteTooSmall { .. })));
    }
}
