//! Fixed workloads shared by the criterion benches.

use arbor_core::graph::{generate, Family, GeneratorSpec};
use arbor_core::MultiGraph;

/// Sizes swept by default: powers of two from 256 to 2048.
pub const SIZES: [usize; 4] = [256, 512, 1024, 2048];

/// Union of `k` random spanning trees on `n` vertices, seeded by `n`.
pub fn forest_union(n: usize, k: usize) -> MultiGraph {
    generate(&GeneratorSpec::new(Family::RandomForestUnion { n, k }, n as u64)).expect("valid generator parameters")
}

/// Sparse simple graph with average degree about `degree`.
pub fn sparse_simple(n: usize, degree: f64) -> MultiGraph {
    let p = (degree / n as f64).min(1.0);
    generate(&GeneratorSpec::new(Family::Gnp { n, p }, n as u64)).expect("valid generator parameters")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workloads_have_expected_shape() {
        let g = forest_union(64, 3);
        assert_eq!(g.edge_count(), 3 * 63);
        assert!(sparse_simple(64, 4.0).is_simple());
    }
}
