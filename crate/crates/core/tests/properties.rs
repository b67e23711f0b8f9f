use std::collections::BTreeSet;

use ppg::io::{instance_from_json, instance_to_json, InstanceFile};
use ppg::rational::{dist, int};
use ppg::rigidity::{check_drawing_equivalence, Pins, Solver, TreeOrder};
use ppg::{canonicalize, Placement, Ppg, Rational, Round};
use proptest::prelude::*;

fn distinct_positions(n: std::ops::RangeInclusive<usize>, range: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-range..=range, n)
        .prop_map(|s| s.into_iter().collect::<Vec<_>>())
        .prop_shuffle()
}

/// A connected graph: a random spanning tree plus a random subset of extra pairs.
fn graph_on(xs: &[i64], parents: &[usize], extra: &[bool]) -> Ppg {
    let n = xs.len();
    let x: Vec<Rational> = xs.iter().map(|&v| int(v)).collect();
    let mut g = Ppg::new(n);
    let mut have = BTreeSet::new();
    for v in 1..n {
        let p = parents[v - 1] % v;
        g.add_edge(p, v, Round::First, dist(&x[p], &x[v])).unwrap();
        have.insert((p, v));
    }
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !have.contains(&(a, b)) && extra.get(k).copied().unwrap_or(false) {
                let r = if k % 2 == 0 { Round::First } else { Round::Second };
                g.add_edge(a, b, r, dist(&x[a], &x[b])).unwrap();
            }
            k += 1;
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hidden_placement_is_always_found(
        xs in distinct_positions(2..=8, 12),
        parents in prop::collection::vec(0usize..100, 7),
        extra in prop::collection::vec(any::<bool>(), 28),
    ) {
        let g = graph_on(&xs, &parents, &extra);
        let truth = canonicalize(&xs.iter().map(|&v| int(v)).collect::<Vec<_>>()).unwrap();
        let set = Solver::default().solve(&g, &Pins::new()).unwrap();
        prop_assert!(set.contains(&truth));
        prop_assert!(set.placements.iter().all(|p| p.satisfies(&g) && p.is_canonical()));
    }

    #[test]
    fn tree_order_does_not_change_the_answer(
        xs in distinct_positions(3..=7, 10),
        parents in prop::collection::vec(0usize..100, 6),
        extra in prop::collection::vec(any::<bool>(), 21),
    ) {
        let g = graph_on(&xs, &parents, &extra);
        let bfs = Solver::default().solve(&g, &Pins::new()).unwrap();
        let shuffled = Solver::default().with_tree(TreeOrder::Shuffled(5)).solve(&g, &Pins::new()).unwrap();
        let a: BTreeSet<Placement> = bfs.placements.into_iter().collect();
        let b: BTreeSet<Placement> = shuffled.placements.into_iter().collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn rigidity_and_drawings_exclude_each_other(
        xs in distinct_positions(2..=6, 9),
        parents in prop::collection::vec(0usize..100, 5),
        extra in prop::collection::vec(any::<bool>(), 15),
    ) {
        let g = graph_on(&xs, &parents, &extra);
        prop_assert!(check_drawing_equivalence(&g, 24).unwrap().consistent);
    }

    #[test]
    fn complete_graphs_are_rigid(xs in distinct_positions(2..=7, 1000)) {
        let n = xs.len();
        let x: Vec<Rational> = xs.iter().map(|&v| int(v)).collect();
        let mut g = Ppg::new(n);
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b, Round::First, dist(&x[a], &x[b])).unwrap();
            }
        }
        let set = Solver::default().solve(&g, &Pins::new()).unwrap();
        prop_assert_eq!(set.len(), 1);
        prop_assert_eq!(&set.placements[0], &canonicalize(&x).unwrap());
    }

    #[test]
    fn instances_round_trip(
        xs in distinct_positions(2..=8, 50),
        parents in prop::collection::vec(0usize..100, 7),
        extra in prop::collection::vec(any::<bool>(), 28),
    ) {
        let g = graph_on(&xs, &parents, &extra);
        let back = instance_from_json(&instance_to_json(&g)).unwrap();
        prop_assert_eq!(InstanceFile::from(&back), InstanceFile::from(&g));
    }
}
