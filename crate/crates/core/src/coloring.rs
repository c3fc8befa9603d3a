//! Partial edge colorings and per-edge admissible color lists.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeId;
use crate::runtime::RandomStream;

pub type Color = u32;

/// Optional color per edge id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "ColoringJson", try_from = "ColoringJson")]
pub struct PartialColoring {
    colors: Vec<Option<Color>>,
}

#[derive(Serialize, Deserialize)]
struct ColoringJson {
    colors: usize,
    assignment: Vec<Option<Color>>,
}

impl From<PartialColoring> for ColoringJson {
    fn from(c: PartialColoring) -> Self {
        Self { colors: c.color_count(), assignment: c.colors }
    }
}

impl TryFrom<ColoringJson> for PartialColoring {
    type Error = Error;
    fn try_from(json: ColoringJson) -> Result<Self> {
        let c = Self { colors: json.assignment };
        if c.color_count() != json.colors {
            return Err(Error::InvalidParameter(format!(
                "coloring declares {} colors but uses {}",
                json.colors,
                c.color_count()
            )));
        }
        Ok(c)
    }
}

impl PartialColoring {
    /// All `m` edges uncolored.
    pub fn new(m: usize) -> Self {
        Self { colors: vec![None; m] }
    }

    pub fn from_assignment(colors: Vec<Option<Color>>) -> Self {
        Self { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, e: EdgeId) -> Option<Color> {
        self.colors[e]
    }

    pub fn set(&mut self, e: EdgeId, c: Color) {
        self.colors[e] = Some(c);
    }

    pub fn assign(&mut self, e: EdgeId, c: Option<Color>) {
        self.colors[e] = c;
    }

    pub fn clear(&mut self, e: EdgeId) {
        self.colors[e] = None;
    }

    pub fn assignment(&self) -> &[Option<Color>] {
        &self.colors
    }

    pub fn is_total(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().flatten().count()
    }

    pub fn uncolored(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.colors.iter().enumerate().filter(|(_, c)| c.is_none()).map(|(e, _)| e)
    }

    /// Distinct colors in use, ascending.
    pub fn used_colors(&self) -> Vec<Color> {
        self.colors.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn color_count(&self) -> usize {
        self.used_colors().len()
    }

    /// One past the largest color in use.
    pub fn color_bound(&self) -> Color {
        self.colors.iter().flatten().map(|&c| c + 1).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serializes")
    }
}

/// Admissible colors per edge, each list sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteSet {
    lists: Vec<Vec<Color>>,
}

impl PaletteSet {
    /// Every one of `m` edges may use colors `0..k`.
    pub fn uniform(m: usize, k: usize) -> Self {
        Self { lists: vec![(0..k as Color).collect(); m] }
    }

    /// `m` independent uniform `size`-subsets of `0..universe`.
    pub fn random(m: usize, size: usize, universe: usize, stream: &RandomStream) -> Result<Self> {
        if size > universe {
            return Err(Error::InvalidParameter(format!("cannot draw {size} colors from {universe}")));
        }
        let mut rng = stream.derive("palettes", 0).rng();
        let lists = (0..m)
            .map(|_| {
                let mut list: Vec<Color> = sample(&mut rng, universe, size).into_iter().map(|c| c as Color).collect();
                list.sort_unstable();
                list
            })
            .collect();
        Ok(Self { lists })
    }

    pub fn lists(&self) -> &[Vec<Color>] {
        &self.lists
    }

    pub fn from_lists(lists: Vec<Vec<Color>>) -> Result<Self> {
        let mut out = Vec::with_capacity(lists.len());
        for (e, mut list) in lists.into_iter().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("palette of edge {e} repeats a color")));
            }
            out.push(list);
        }
        Ok(Self { lists: out })
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn palette(&self, e: EdgeId) -> &[Color] {
        &self.lists[e]
    }

    pub fn contains(&self, e: EdgeId, c: Color) -> bool {
        self.lists[e].binary_search(&c).is_ok()
    }

    pub fn min_size(&self) -> usize {
        self.lists.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// One past the largest listed color.
    pub fn universe_bound(&self) -> Color {
        self.lists.iter().flatten().map(|&c| c + 1).max().unwrap_or(0)
    }

    /// Errors with the first edge whose palette is shorter than `needed`.
    pub fn require_size(&self, needed: usize) -> Result<()> {
        match self.lists.iter().position(|l| l.len() < needed) {
            Some(edge) => Err(Error::PaletteTooSmall { edge, size: self.lists[edge].len(), needed }),
            None => Ok(()),
        }
    }

    /// Palettes of the listed edges, in the given order.
    pub fn restrict(&self, edges: &[EdgeId]) -> Self {
        Self { lists: edges.iter().map(|&e| self.lists[e].clone()).collect() }
    }
}
