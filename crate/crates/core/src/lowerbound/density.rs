//! Edge density `|E|/|V|` with half-edge group accounting.
//!
//! Nodes are partitioned (fractionally) into groups and every edge hands half
//! of itself to each endpoint's owners, so group edge weights sum to `|E|` and
//! group node weights sum to `|V|`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::extract_degree2_paths;
use crate::model::{PointId, Ppg, Round};
use crate::rational::{self, Rational};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    /// Degree-2 path of `G_1` with `k >= 2` nodes between two heavy anchors.
    TypeA,
    /// A heavy node of `G_2` plus the degree-2 and pendant nodes it owns.
    Heavy,
    /// A component of `G_2` without heavy nodes.
    Component,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupShare {
    pub kind: GroupKind,
    /// Points owning at least part of their weight here.
    pub points: Vec<PointId>,
    #[serde(with = "rational::serde_str")]
    pub node_weight: Rational,
    #[serde(with = "rational::serde_str")]
    pub edge_weight: Rational,
    #[serde(with = "rational::serde_str")]
    pub density: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub edges: usize,
    pub nodes: usize,
    #[serde(with = "rational::serde_str")]
    pub density: Rational,
    pub groups: Vec<GroupShare>,
    /// Group node and edge weights summed back up; equal to `nodes`, `edges`.
    #[serde(with = "rational::serde_str")]
    pub node_total: Rational,
    #[serde(with = "rational::serde_str")]
    pub edge_total: Rational,
}

/// `(1/k)(2·1/2 + (k-1) + floor((k+1)/3)·1/2)`: a `G_1` path of `k` degree-2
/// nodes, its two half anchor edges, and one half round-2 edge per three nodes.
pub fn type_a_density(k: usize) -> Rational {
    assert!(k > 0);
    let half = rational::ratio(1, 2);
    let e = rational::int(1) + rational::int(k as i64 - 1) + half * rational::int((k as i64 + 1) / 3);
    e / rational::int(k as i64)
}

/// A heavy node with degree-2 paths of `m` nodes in total hanging off it.
pub fn heavy_group_density(m: usize) -> Rational {
    rational::int(1) + rational::ratio(1, m as i64 + 2)
}

pub fn density(g: &Ppg) -> DensityReport {
    let n = g.n();
    let g1 = g.round_view(Round::First);
    let deg1 = g1.degrees();
    let deg2 = g.degrees();

    // owner[v]: (group, share of v)
    let mut owner: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
    let mut kinds: Vec<GroupKind> = Vec::new();
    let one = rational::int(1);
    let half = rational::ratio(1, 2);

    for p in extract_degree2_paths(&g1, Round::First).paths {
        if p.k() >= 2 && deg1[p.start.0] >= 3 && deg1[p.end.0] >= 3 {
            let id = kinds.len();
            kinds.push(GroupKind::TypeA);
            for v in &p.nodes {
                owner[v.0].push((id, one.clone()));
            }
        }
    }
    for v in 0..n {
        if owner[v].is_empty() && deg2[v] >= 3 {
            owner[v].push((kinds.len(), one.clone()));
            kinds.push(GroupKind::Heavy);
        }
    }

    let primary = |owner: &Vec<Vec<(usize, Rational)>>, v: usize| owner[v].first().map(|o| o.0);
    let g2 = extract_degree2_paths(g, Round::Second);
    for p in &g2.paths {
        let (s, e) = (p.start.0, p.end.0);
        let mut free: Vec<usize> = p.nodes.iter().map(|v| v.0).filter(|&v| owner[v].is_empty()).collect();
        let (hs, he) = (deg2[s] >= 3, deg2[e] >= 3);
        if hs && he {
            let (os, oe) = (primary(&owner, s).unwrap(), primary(&owner, e).unwrap());
            for v in free {
                owner[v].push((os, half.clone()));
                owner[v].push((oe, half.clone()));
            }
        } else if hs || he {
            let (anchor, far) = if hs { (s, e) } else { (e, s) };
            if owner[far].is_empty() {
                free.push(far);
            }
            let o = primary(&owner, anchor).unwrap();
            for v in free {
                owner[v].push((o, one.clone()));
            }
        }
    }

    // whatever is left lives in a heavy-less component
    let comp = g.components();
    let mut comp_group: BTreeMap<usize, usize> = BTreeMap::new();
    for v in 0..n {
        if owner[v].is_empty() {
            let id = *comp_group.entry(comp[v]).or_insert_with(|| {
                kinds.push(GroupKind::Component);
                kinds.len() - 1
            });
            owner[v].push((id, one.clone()));
        }
    }

    let mut node_w = vec![Rational::zero(); kinds.len()];
    let mut edge_w = vec![Rational::zero(); kinds.len()];
    let mut points: Vec<Vec<PointId>> = vec![Vec::new(); kinds.len()];
    for v in 0..n {
        for (gid, share) in &owner[v] {
            node_w[*gid] += share;
            if points[*gid].last() != Some(&PointId(v)) {
                points[*gid].push(PointId(v));
            }
        }
    }
    for e in g.edges() {
        for end in [e.a.0, e.b.0] {
            for (gid, share) in &owner[end] {
                edge_w[*gid] += &half * share;
            }
        }
    }

    let node_total: Rational = node_w.iter().sum();
    let edge_total: Rational = edge_w.iter().sum();
    let groups = kinds
        .into_iter()
        .enumerate()
        .map(|(i, kind)| GroupShare {
            kind,
            points: std::mem::take(&mut points[i]),
            density: &edge_w[i] / &node_w[i],
            node_weight: node_w[i].clone(),
            edge_weight: edge_w[i].clone(),
        })
        .collect();
    let density = if n == 0 {
        Rational::zero()
    } else {
        rational::ratio(g.edge_count() as i64, n as i64)
    };
    DensityReport {
        edges: g.edge_count(),
        nodes: n,
        density,
        groups,
        node_total,
        edge_total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn graph(n: usize, edges: &[(usize, usize, u8)]) -> Ppg {
        Ppg::with_edges(
            n,
            edges
                .iter()
                .map(|&(a, b, r)| (a, b, Round::from_number(r).unwrap(), int(1))),
        )
        .unwrap()
    }

    #[test]
    fn worked_values() {
        assert_eq!(type_a_density(2), ratio(5, 4));
        assert_eq!(type_a_density(3), ratio(7, 6));
        assert_eq!(type_a_density(4), ratio(9, 8));
        for m in 1..=6 {
            let d = heavy_group_density(m);
            assert_eq!(d, (ratio(m as i64, 2) + ratio(3, 2)) / (ratio(m as i64, 2) + int(1)));
            assert!(d >= ratio(9, 8));
        }
        assert!(heavy_group_density(7) < ratio(9, 8));
    }

    #[test]
    fn type_a_group_with_one_round2_edge() {
        // anchors 0, 5 with pendant leaves 6,7 and 8,9; round-2 edge 2-5
        let g = graph(
            10,
            &[
                (0, 1, 1),
                (1, 2, 1),
                (2, 3, 1),
                (3, 4, 1),
                (4, 5, 1),
                (0, 6, 1),
                (0, 7, 1),
                (5, 8, 1),
                (5, 9, 1),
                (2, 5, 2),
            ],
        );
        let rep = density(&g);
        let a: Vec<_> = rep.groups.iter().filter(|s| s.kind == GroupKind::TypeA).collect();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].density, ratio(9, 8));
        assert_eq!(rep.node_total, int(10));
        assert_eq!(rep.edge_total, int(10));
        assert_eq!(rep.density, int(1));
    }

    #[test]
    fn heavyless_component_is_one_group() {
        let g = graph(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 2)]);
        let rep = density(&g);
        assert_eq!(rep.groups.len(), 1);
        assert_eq!(rep.groups[0].kind, GroupKind::Component);
        assert_eq!(rep.groups[0].density, int(1));
    }
}
