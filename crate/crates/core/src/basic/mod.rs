//! Building blocks: H-partitions, acyclic orientations, greedy list
//! decompositions, star-forest splits and tree shortening.

mod diameter;
mod hpartition;
mod lfd;
mod pseudotree;
mod star3t;

pub use diameter::{
    reduce_forest_diameter, shorten_to_inv_eps, DiameterSplit, Shortened, DIAMETER_FACTOR, LENGTH_FACTOR,
};
pub use hpartition::{acyclic_orientation, h_partition, orientation_from_partition, peel, peeling_bound, HPartition};
pub use lfd::{degeneracy_lsfd, greedy_along, greedy_lfd, lsfd_4eps};
pub use pseudotree::pseudotree_two_star_forests;
pub use star3t::{star_forest_3t, star_forest_from_orientation, three_color_forest};
