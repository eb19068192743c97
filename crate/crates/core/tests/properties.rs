use proptest::prelude::*;
use sel_core::graph::{neighborhood, second_neighborhood};
use sel_core::threshold::{compute_thresholds_with, lambda, ThresholdConfig};
use sel_core::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut i = 0;
            for v in 1..n {
                for u in 0..v {
                    if bits[i] {
                        edges.push((u, v));
                    }
                    i += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn graph_and_perm(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn graph6_round_trips(g in graph_strategy(70)) {
        let s = write_graph6(&g);
        prop_assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn handshake_and_edge_list(g in graph_strategy(40)) {
        let degree_sum: usize = g.degrees().iter().sum();
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
        prop_assert_eq!(g.edges().count(), g.edge_count());
        let n = g.order();
        prop_assert_eq!(g.edges().count() + g.non_edges().count(), n * (n - 1) / 2);
    }

    #[test]
    fn second_neighborhood_excludes_first(g in graph_strategy(30), v in 0usize..30) {
        let v = v % g.order();
        let n1 = neighborhood(&g, v);
        let n2 = second_neighborhood(&g, v);
        prop_assert!(n1.is_disjoint(&n2));
        prop_assert!(!n2.contains(v));
        for w in n2.iter() {
            prop_assert!(g.neighbor_iter(w).any(|u| n1.contains(u)));
        }
    }

    #[test]
    fn packing_drops_by_at_most_one_per_edge(g in graph_strategy(11)) {
        let nu = max_cycle_packing(&g).unwrap().nu;
        for (u, v) in g.edges() {
            let smaller = max_cycle_packing(&g.without_edge(u, v)).unwrap().nu;
            prop_assert!(smaller <= nu && smaller + 1 >= nu);
        }
    }

    #[test]
    fn packing_adds_over_disjoint_union(a in graph_strategy(9), b in graph_strategy(9)) {
        let na = max_cycle_packing(&a).unwrap().nu;
        let nb = max_cycle_packing(&b).unwrap().nu;
        let u = a.disjoint_union(&b);
        let p = max_cycle_packing(&u).unwrap();
        prop_assert_eq!(p.nu, na + nb);
        prop_assert!(p.witness.is_valid_in(&u));
    }

    #[test]
    fn decision_matches_packing_number(g in graph_strategy(12), k in 1usize..5) {
        let nu = max_cycle_packing(&g).unwrap().nu;
        let ans = has_k_disjoint_cycles(&g, k).unwrap();
        prop_assert_eq!(ans.found, nu >= k);
        if let Some(w) = ans.witness {
            prop_assert_eq!(w.len(), k);
            prop_assert!(w.is_valid_in(&g));
        }
    }

    #[test]
    fn spectral_radius_is_label_invariant((g, perm) in graph_and_perm(25)) {
        let a = spectral_radius(&g, 1e-12).rho;
        let b = spectral_radius(&g.permuted(&perm), 1e-12).rho;
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn spectral_radius_bounds(g in graph_strategy(30)) {
        let p = spectral_radius(&g, 1e-12);
        prop_assert!(p.converged);
        let n = g.order() as f64;
        let avg = 2.0 * g.edge_count() as f64 / n;
        prop_assert!(p.rho >= avg - 1e-9);
        prop_assert!(p.rho <= g.max_degree() as f64 + 1e-9);
        prop_assert!(p.rho * p.rho >= g.max_degree() as f64 - 1e-9);
    }

    #[test]
    fn adding_an_edge_never_lowers_rho(g in graph_strategy(20), pick in any::<prop::sample::Index>()) {
        let missing: Vec<_> = g.non_edges().collect();
        prop_assume!(!missing.is_empty());
        let (u, v) = missing[pick.index(missing.len())];
        let a = spectral_radius(&g, 1e-12).rho;
        let b = spectral_radius(&g.with_edge(u, v), 1e-12).rho;
        prop_assert!(b >= a - 1e-9);
    }

    #[test]
    fn threshold_sets_follow_definitions(g in graph_strategy(30), k in 1u64..5) {
        let p = spectral_radius(&g, 1e-12);
        let cfg = ThresholdConfig::default();
        let t = compute_thresholds_with(&g, &p, k, &cfg).unwrap();
        prop_assert!(t.is_consistent(&g, &cfg));
        prop_assert!(t.r_dprime.is_subset(&t.r_prime));
        prop_assert!(t.r_prime.is_subset(&t.r));
        let lam = lambda(k);
        for v in 0..g.order() {
            let r = p.x[v] / p.x[t.u_star];
            prop_assert_eq!(t.r.contains(v), r > lam);
            prop_assert_eq!(t.r_prime.contains(v), r > 4.0 * lam);
            prop_assert_eq!(t.r_dprime.contains(v), r >= 1.0 / (4.0 * k as f64));
            prop_assert_eq!(t.r_tprime.contains(v), t.r_dprime.iter().all(|w| g.has_edge(v, w)));
            prop_assert_eq!(t.r_qprime.contains(v), !t.r_dprime.contains(v) && !t.r_tprime.contains(v));
        }
    }

    #[test]
    fn intersection_lower_bound(
        sets in proptest::collection::vec(proptest::collection::btree_set(0u16..50, 0..40), 1..7)
    ) {
        let (inter, bound) = set_intersection_bound(&sets);
        prop_assert!(inter as i64 >= bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn canonical_form_is_label_invariant((g, perm) in graph_and_perm(8)) {
        let a = canonical_form(&g).unwrap();
        let b = canonical_form(&g.permuted(&perm)).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(a.edge_count(), g.edge_count());
        prop_assert_eq!(canonical_form(&a.to_graph()).unwrap(), a);
    }
}

#[test]
fn dense_and_analytic_thresholds_agree() {
    // exact ties such as (n, k) = (179, 2) sit on a threshold, so the dense
    // side gets a slack far below any other ratio gap
    let cfg = ThresholdConfig { slack: 1e-10 };
    for k in 1..=5u64 {
        for n in 2 * k..=500 {
            let g = make_complete_split(n as usize, (2 * k - 1) as usize).unwrap();
            let p = spectral_radius(&g, 1e-12);
            let dense = compute_thresholds_with(&g, &p, k, &cfg).unwrap();
            let analytic = split_threshold_structure(n, k).unwrap().materialize().unwrap();
            assert_eq!(dense.r, analytic.r, "R at n={n} k={k}");
            assert_eq!(dense.r_prime, analytic.r_prime, "R' at n={n} k={k}");
            assert_eq!(dense.r_dprime, analytic.r_dprime, "R'' at n={n} k={k}");
            assert_eq!(dense.r_tprime, analytic.r_tprime, "R''' at n={n} k={k}");
            assert_eq!(dense.r_qprime, analytic.r_qprime, "R'''' at n={n} k={k}");
        }
    }
}

#[test]
fn lemma_checks_report_not_applicable_at_desk_scale() {
    let g = make_complete_split(50, 3).unwrap();
    let p = spectral_radius(&g, 1e-12);
    let t = compute_thresholds(&g, &p, 2).unwrap();
    let report = verify_lemma_bounds(&t, &g, 2);
    assert!(!report.hypothesis_satisfied);
    assert!(!report.any_fail());
    assert_eq!(t.r_dprime.len(), 50);
}
