//! Star-forest decompositions of simple graphs.

pub mod bipartite;
pub mod lll;
pub mod sfd;

pub use bipartite::{build_hv, sfd_from_matchings, CenterAssignment, LocalBipartite, MatchingSplit};
pub use lll::{distributed_lll, LllInstance, LllOutcome};
pub use sfd::{
    sample_centers_lsfd, sample_centers_sfd, star_forest_decomposition, MatchingBound, SampledCenters, StarMode,
    StarRun, Thresholds,
};
