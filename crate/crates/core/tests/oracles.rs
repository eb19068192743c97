//! Brute-force cross-checks for cycle enumeration and exhaustive search.

use std::collections::{BTreeMap, BTreeSet};

use sel_core::*;

/// Every labeled graph on `n` vertices.
fn all_labeled(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &e)| e);
        Graph::from_edges(n, edges).unwrap()
    })
}

/// Simple cycles as sorted vertex lists up to rotation and reflection, by
/// trying every vertex sequence.
fn brute_cycles(g: &Graph) -> BTreeSet<Vec<usize>> {
    fn extend(g: &Graph, path: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        let start = path[0];
        let last = *path.last().unwrap();
        if path.len() >= 3 && g.has_edge(last, start) {
            // normalize: start is the minimum, second vertex below the last
            if path[1] < last {
                out.insert(path.clone());
            }
        }
        for w in g.neighbor_iter(last) {
            if w > start && !path.contains(&w) {
                path.push(w);
                extend(g, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.order() {
        extend(g, &mut vec![s], &mut out);
    }
    out
}

fn is_chordless(g: &Graph, cycle: &[usize]) -> bool {
    let edges_inside = cycle
        .iter()
        .enumerate()
        .flat_map(|(i, &u)| cycle[i + 1..].iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| g.has_edge(u, v))
        .count();
    edges_inside == cycle.len()
}

#[test]
fn petersen_chordless_cycles() {
    let g = Graph::petersen();
    let by_len = |sets: &[VertexSet]| {
        let mut m = BTreeMap::new();
        for s in sets {
            *m.entry(s.len()).or_insert(0) += 1;
        }
        m
    };
    let fast = enumerate_chordless_cycles(&g).unwrap();
    let brute: Vec<VertexSet> = brute_cycles(&g)
        .into_iter()
        .filter(|c| is_chordless(&g, c))
        .map(|c| VertexSet::from_vertices(10, c))
        .collect();
    assert_eq!(by_len(&fast)[&5], 12);
    assert_eq!(by_len(&fast), by_len(&brute));
    let fast_sets: BTreeSet<Vec<usize>> = fast.iter().map(|s| s.to_vec()).collect();
    let brute_sets: BTreeSet<Vec<usize>> = brute.iter().map(|s| s.to_vec()).collect();
    assert_eq!(fast_sets, brute_sets);
}

#[test]
fn chordless_cycles_match_brute_force_on_small_graphs() {
    for n in 3..=6 {
        for g in all_labeled(n).step_by(7) {
            let fast: BTreeSet<Vec<usize>> = enumerate_chordless_cycles(&g)
                .unwrap()
                .iter()
                .map(|s| s.to_vec())
                .collect();
            let brute: BTreeSet<Vec<usize>> = brute_cycles(&g)
                .into_iter()
                .filter(|c| is_chordless(&g, c))
                .map(|mut c| {
                    c.sort_unstable();
                    c
                })
                .collect();
            assert_eq!(fast, brute, "{}", write_graph6(&g));
        }
    }
}

#[test]
fn isomorphism_classes_of_small_graphs() {
    let expected = [1, 2, 4, 11, 34, 156, 1044];
    for (i, &count) in expected.iter().enumerate() {
        let n = i + 1;
        let keys: BTreeSet<CanonicalKey> = all_labeled(n).map(|g| canonical_form(&g).unwrap()).collect();
        assert_eq!(keys.len(), count, "n = {n}");
    }
}

fn brute_feasible_keys(n: usize, k: usize) -> BTreeSet<CanonicalKey> {
    all_labeled(n)
        .filter(|g| max_cycle_packing(g).unwrap().nu < k)
        .map(|g| canonical_form(&g).unwrap())
        .collect()
}

#[test]
fn enumeration_matches_filtered_brute_force() {
    for n in 1..=6 {
        for k in 1..=2 {
            let mut seen = Vec::new();
            enumerate_feasible(n, k, &EnumerationOptions::default(), |c| seen.push(c.key)).unwrap();
            let unique: BTreeSet<CanonicalKey> = seen.iter().copied().collect();
            assert_eq!(unique.len(), seen.len(), "duplicate class at n={n} k={k}");
            assert_eq!(unique, brute_feasible_keys(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn small_enumeration_counts() {
    let count = |n, k| {
        enumerate_feasible(n, k, &EnumerationOptions::default(), |_| {})
            .unwrap()
            .classes
    };
    assert_eq!(count(4, 1), 6);
    assert_eq!(count(4, 3), 11);
    enumerate_feasible(5, 2, &EnumerationOptions::default(), |c| {
        assert!(max_cycle_packing(&c.graph).unwrap().nu <= 1);
    })
    .unwrap();
}

#[test]
fn pruned_search_matches_unpruned_optimum() {
    for n in 3..=6 {
        for k in 1..=2 {
            let mut best_edges = 0;
            let mut best_rho = 0.0f64;
            for g in all_labeled(n) {
                if max_cycle_packing(&g).unwrap().nu < k {
                    best_edges = best_edges.max(g.edge_count());
                    best_rho = best_rho.max(spectral_radius(&g, 1e-12).rho);
                }
            }
            let e = edge_maximizer(n, k, &EnumerationOptions::default()).unwrap();
            let s = spectral_maximizer(n, k, &SpectralSearchOptions::default()).unwrap();
            assert_eq!(e.optimum, best_edges as f64, "edges n={n} k={k}");
            assert!(
                (s.optimum - best_rho).abs() <= 1e-9 * best_rho.max(1.0),
                "rho n={n} k={k}"
            );
        }
    }
}

#[test]
fn maximal_classes_suffice_for_spectral_optimum() {
    for n in 4..=7 {
        for k in 1..=2 {
            let fast = spectral_maximizer(n, k, &SpectralSearchOptions::default()).unwrap();
            let opts = SpectralSearchOptions {
                evaluate_all: true,
                ..Default::default()
            };
            let all = spectral_maximizer(n, k, &opts).unwrap();
            assert!((fast.optimum - all.optimum).abs() <= 1e-12 * all.optimum.max(1.0));
            assert!(fast.graphs_evaluated <= all.graphs_evaluated);
        }
    }
}

#[test]
fn seven_vertices_two_cycles_edge_optimum() {
    // below the range where the edge bound is known to be sharp; the
    // measured optimum happens to equal (2k-1)(n-k) = 15 here
    let r = edge_maximizer(7, 2, &EnumerationOptions::default()).unwrap();
    assert_eq!(r.optimum, erdos_posa_edge_bound(7, 2) as f64);
    let split = canonical_form(&make_complete_split(7, 3).unwrap()).unwrap();
    assert!(r.witness_keys().contains(&split));
}

#[test]
fn witnesses_are_feasible_and_serializable() {
    let r = spectral_maximizer(8, 2, &SpectralSearchOptions::default()).unwrap();
    for w in &r.witnesses {
        let g = parse_graph6(&w.graph6).unwrap();
        assert!(!has_k_disjoint_cycles(&g, 2).unwrap().found);
        assert_eq!(canonical_form(&g).unwrap(), w.key.unwrap());
    }
    let json = serde_json::to_string(&r).unwrap();
    let back: ExtremalRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back.witness_keys(), r.witness_keys());
}
