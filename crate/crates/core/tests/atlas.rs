use ppg::atlas::{connected_graphs, run_atlas};

#[test]
fn six_vertex_sweep_has_no_inconsistency() {
    let r = run_atlas(6, 50, 11).unwrap();
    assert_eq!(r.graphs, vec![1, 1, 2, 6, 21, 112]);
    assert_eq!(r.cases, 143 * 50);
    assert!(r.inconsistencies.is_empty(), "{:?}", r.inconsistencies.first());
    // small coordinate ranges make both outcomes common
    assert!(r.rigid > r.cases / 5 && r.rigid < r.cases * 4 / 5, "{} of {}", r.rigid, r.cases);
}

#[test]
fn four_vertex_sweep() {
    let r = run_atlas(4, 50, 0).unwrap();
    assert!(r.inconsistencies.is_empty());
    assert_eq!(r.cases, 10 * 50);
}

#[test]
fn graphs_are_connected_and_edge_sets_distinct() {
    for n in 1..=5 {
        let gs = connected_graphs(n);
        let mut seen = std::collections::BTreeSet::new();
        for g in &gs {
            assert!(g.len() >= n - 1);
            assert!(seen.insert(g.clone()));
        }
    }
}
