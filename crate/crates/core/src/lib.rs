//! Graph kernels for studying graphs without `k` vertex-disjoint cycles:
//! bit-packed graphs, exact cycle packing, Perron vectors, eigenvector
//! threshold sets, and exhaustive or local extremal search.

pub mod canon;
pub mod cycles;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod local;
pub mod search;
pub mod spectral;
pub mod threshold;

pub use canon::{canonical_form, canonical_labeling, CanonicalKey, CANON_MAX_ORDER};
pub use cycles::{
    enumerate_chordless_cycles, has_k_disjoint_cycles, max_cycle_packing, CyclePacking, DisjointCyclesAnswer,
    PackingOptions, PackingResult,
};
pub use error::{Error, Result};
pub use graph::{edge_count_between, edge_count_within, make_complete_split, Graph, VertexSet};
pub use graph6::{parse_graph6, write_graph6};
pub use local::{claim3_rewire, local_search, LocalSearchOptions, LocalSearchOutcome};
pub use search::{
    edge_maximizer, enumerate_feasible, spectral_maximizer, EnumerationOptions, EnumerationStats,
    ExtremalRecord, Objective, SearchMode, SearchSpec, SpectralSearchOptions, Witness,
};
pub use spectral::{
    closed_form_split_rho, erdos_posa_edge_bound, spectral_radius, split_perron_profile, PerronResult,
    SplitSpectrum,
};
pub use threshold::{
    compute_thresholds, hypothesis_order, set_intersection_bound, split_threshold_structure,
    verify_lemma_bounds, ClassMembership, LemmaReport, SplitThresholds, ThresholdSets,
};
