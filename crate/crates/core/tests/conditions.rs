use ppg::conditions::{
    check_three_path, replacement_conditions, serial, serial_condition_sets, seven_cycle_conditions,
    ConditionSource, EdgeName, ThreePathLengths,
};
use ppg::rational::{dist, int};
use ppg::rigidity::{enumerate_layer_drawings, Pins, Solver};
use ppg::{PointId, Ppg, Rational, Round};

fn component(x: &[Rational; 10]) -> Ppg {
    let mut g = Ppg::new(10);
    for i in 0..3 {
        for (a, b) in [(i, 3 + i), (3 + i, 6 + i), (6 + i, 9)] {
            g.add_edge(a, b, Round::First, dist(&x[a], &x[b])).unwrap();
        }
    }
    g
}

fn pinned_placements(x: &[Rational; 10]) -> usize {
    let pins: Pins = (0..3).map(|i| (PointId(i), x[i].clone())).collect();
    Solver::default().with_cap(10).solve(&component(x), &pins).unwrap().len()
}

#[test]
fn degenerate_component_passes_the_lists_but_flexes() {
    // r1 - s = s - r3 and q1r1 = r3q3: the r1 and r3 branches can swap sides
    let x = [-10, 3, -2, 6, 12, -6, 10, 9, -11, -9].map(int);
    let lens = ThreePathLengths::from_positions(&x).unwrap();
    assert!(check_three_path(&lens).unwrap().is_empty());
    assert_eq!(pinned_placements(&x), 2);
}

#[test]
fn generic_component_is_rigid() {
    let x = [0, 1_000, 2_600, 37, 1_411, 2_203, 7_919, 6_007, 5_501, 4_999].map(int);
    let lens = ThreePathLengths::from_positions(&x).unwrap();
    assert!(check_three_path(&lens).unwrap().is_empty());
    assert_eq!(pinned_placements(&x), 1);
}

#[test]
fn serial_lists_never_mention_middle_edges() {
    for set in serial_condition_sets() {
        for k in 1..=3 {
            assert!(set.conditions.iter().all(|c| !c.mentions(EdgeName::QR(k))), "{set}");
        }
    }
}

#[test]
fn expansion_counts() {
    let counts: Vec<usize> = (1..=6).map(|k| serial(k).expanded_count()).collect();
    assert_eq!(counts, vec![4, 4, 4, 20, 45, 61]);
    assert_eq!(replacement_conditions().conditions.len(), 4);
    assert_eq!(replacement_conditions().source, ConditionSource::Replacement);
}

#[test]
fn colliding_link_length_is_reported() {
    let x = [0, 1_000, 2_600, 37, 1_411, 2_203, 7_919, 6_007, 5_501, 4_999].map(int);
    let good = ThreePathLengths::from_positions(&x).unwrap();
    assert!(check_three_path(&good).unwrap().is_empty());
    let r1s = good.get(EdgeName::RS(1)).unwrap().clone();
    let bad = good.with(EdgeName::PQ(1), r1s);
    let v = check_three_path(&bad).unwrap();
    assert!(v.iter().any(|v| v.source == ConditionSource::Serial(4)));
}

/// The seven-cycle `p1 q1 r1 s r2 q2 p2` closed by `p2 p1`.
fn seven_cycle(x: [i64; 7]) -> (Ppg, ThreePathLengths) {
    let x = x.map(int);
    let names = [
        EdgeName::PQ(1),
        EdgeName::QR(1),
        EdgeName::RS(1),
        EdgeName::RS(2),
        EdgeName::QR(2),
        EdgeName::PQ(2),
        EdgeName::P1P2,
    ];
    let mut g = Ppg::new(7);
    let mut map = std::collections::BTreeMap::new();
    for i in 0..7 {
        let j = (i + 1) % 7;
        let l = dist(&x[i], &x[j]);
        g.add_edge(i, j, Round::First, l.clone()).unwrap();
        map.insert(names[i], l);
    }
    (g, ThreePathLengths::new(map).unwrap())
}

#[test]
fn equal_pinned_gap_and_middle_edge_flex_the_seven_cycle() {
    // p1=0, p2=5 and q2 - r2 = 5: the two equal edges can trade directions
    let (g, lens) = seven_cycle([0, 17, 41, 23, -31, -26, 5]);
    let group1 = &seven_cycle_conditions()[0];
    assert!(!group1.violations(&lens).unwrap().is_empty());
    let placements = Solver::default().solve(&g, &Pins::new()).unwrap();
    assert_eq!(placements.len(), 2);
    assert!(!enumerate_layer_drawings(&g, 1, 24).unwrap().is_empty());
}

#[test]
fn generic_seven_cycle_satisfies_every_group() {
    let (g, lens) = seven_cycle([0, 1_013, 3_391, 2_203, -4_513, -1_801, 757]);
    for set in seven_cycle_conditions() {
        assert!(set.violations(&lens).unwrap().is_empty(), "{set}");
    }
    assert_eq!(Solver::default().solve(&g, &Pins::new()).unwrap().len(), 1);
    assert!(enumerate_layer_drawings(&g, 1, 24).unwrap().is_empty());
}
