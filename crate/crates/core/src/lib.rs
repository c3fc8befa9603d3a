//! Forest, list-forest, star-forest and low-outdegree decompositions of
//! loopless multigraphs.
//!
//! Every distributed algorithm is simulated centrally and records the
//! LOCAL-model cost of what it reads in a [`RoundLedger`]. Randomness flows
//! from a [`RandomStream`], so a run is a pure function of its inputs and
//! root seed. The [`verify`] module holds the checkers and brute-force oracles
//! that every output is tested against.

pub mod augment;
pub mod basic;
pub mod coloring;
mod dsu;
pub mod error;
mod flow;
pub mod forest;
pub mod graph;
mod matching;
pub mod netdecomp;
pub mod orientation;
pub mod params;
pub mod runtime;
pub mod star;
pub mod verify;

pub use coloring::{Color, PaletteSet, PartialColoring};
pub use dsu::DisjointSets;
pub use error::{Error, Result};
pub use graph::{EdgeId, MultiGraph, Orientation, Subgraph, Vertex};
pub use matching::{max_bipartite_matching, Matching};
pub use params::Epsilon;
pub use runtime::{RandomStream, RoundLedger};
