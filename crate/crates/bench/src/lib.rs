//! Benchmark fixtures shared by the criterion targets.

use sel_core::{make_complete_split, Graph};

/// Complete split graph with clique `2k-1`, the usual spectral workload.
pub fn split(n: usize, k: usize) -> Graph {
    make_complete_split(n, 2 * k - 1).expect("valid split parameters")
}

/// Disjoint copies of the Petersen graph, a packing workload with many
/// chordless cycles.
pub fn petersen_copies(copies: usize) -> Graph {
    let p = Graph::petersen();
    (1..copies).fold(p.clone(), |acc, _| acc.disjoint_union(&p))
}
