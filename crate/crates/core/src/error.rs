use thiserror::Error;

use crate::graph::{EdgeId, Vertex};

/// One of the five conditions an augmenting sequence must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Condition {
    /// The first edge is uncolored.
    StartsUncolored,
    /// Each edge lies on the cycle the previous edge closes in its color.
    FollowsCycles,
    /// No edge lies on a cycle closed by an edge two or more steps earlier.
    NoEarlierCycle,
    /// The final color closes no cycle with the last edge.
    FinalColorFree,
    /// Every edge's new color is in its palette.
    InPalette,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("graph has {n} vertices, above the exact-oracle limit of {limit}")]
    GraphTooLarge { n: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition not met: {0}")]
    Precondition(String),
    #[error("empty center set")]
    EmptyCenter,
    #[error("edge {edge} has {size} admissible colors but {needed} are required")]
    PaletteTooSmall { edge: EdgeId, size: usize, needed: usize },
    #[error("peeling stalled with {remaining} vertices left; degree bound {bound} is too small")]
    BoundTooSmall { bound: usize, remaining: usize },
    #[error("no underloaded vertex is reachable from {vertex}")]
    NoSink { vertex: Vertex },
    #[error("discovery from edge {edge} exceeded {cap} layers")]
    RadiusExceeded { edge: EdgeId, cap: usize },
    #[error("discovery from edge {edge} stopped growing without finding a free color")]
    Stuck { edge: EdgeId },
    #[error("augmenting sequence violates {condition} at position {index}")]
    InvalidSequence { condition: Condition, index: usize },
    #[error("color class {color} contains a cycle")]
    CyclicColorClass { color: u32 },
    #[error("graph is not a connected pseudo-tree")]
    NotPseudoTree,
    #[error("pseudo-tree admits no split into two star forests")]
    NoTwoStarSplit,
    #[error("graph must be simple")]
    NotSimple,
    #[error("vertex {vertex} has matching deficit {deficit}, above the allowed {allowed}")]
    DeficitExceeded { vertex: Vertex, deficit: usize, allowed: usize },
    #[error("resampling budget of {rounds} rounds exhausted; {} events still violated", surviving.len())]
    LllBudget { rounds: usize, surviving: Vec<usize> },
    #[error("cut of cluster {cluster} still leaks after {attempts} attempts")]
    NotGood { cluster: usize, attempts: usize },
    #[error("palette split missed its size targets after {attempts} attempts")]
    SplitFailed { attempts: usize },
    #[error("decomposition missed its class or diameter cap in {attempts} attempts")]
    DecompositionFailed { attempts: usize },
    #[error("{size} colorings exceed the enumeration budget of {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
