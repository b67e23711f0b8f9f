//! The round-1 query graph: a rigid core, leaves hanging off every core point,
//! and link groups `(r1, r2, r3, s)` with the three edges `r_i s`.
//!
//! Points are numbered core first, then leaves hub by hub, then link groups
//! four at a time (`r1, r2, r3, s`), then any padding points.

use serde::Serialize;

use crate::model::{PointId, Ppg, Role};
use crate::oracle::Pair;

/// Core made of six jewels on a common strut plus three triangle points.
pub const JEWEL_CORE: usize = 35;
pub const JEWEL_CORE_EDGES: usize = 55;
pub const JEWELS: usize = 6;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoreShape {
    /// 35 points, 55 edges.
    Jewels35,
    /// A single triangle; only for small test instances.
    Triangle3,
}

impl CoreShape {
    pub fn size(self) -> usize {
        match self {
            CoreShape::Jewels35 => JEWEL_CORE,
            CoreShape::Triangle3 => 3,
        }
    }

    /// Core edges in query order.
    pub fn edges(self) -> Vec<(usize, usize)> {
        match self {
            CoreShape::Triangle3 => vec![(0, 1), (0, 2), (1, 2)],
            CoreShape::Jewels35 => {
                let mut e = vec![(0, 1)];
                for j in 0..JEWELS {
                    e.extend(jewel_edges(j));
                }
                for t in 32..35 {
                    e.push((0, t));
                    e.push((1, t));
                }
                e
            }
        }
    }
}

/// The eight non-strut edges of jewel `j` on the strut `0-1`. With internal
/// points `c1..c5` it is two strut-to-strut paths `0 c1 c2 1` and `0 c3 c4 1`
/// tied together by the path `c1 c5 c4`.
pub fn jewel_edges(j: usize) -> Vec<(usize, usize)> {
    let c = |i: usize| 2 + 5 * j + (i - 1);
    vec![
        (0, c(1)),
        (c(1), c(2)),
        (c(2), 1),
        (0, c(3)),
        (c(3), c(4)),
        (c(4), 1),
        (c(1), c(5)),
        (c(5), c(4)),
    ]
}

pub fn jewel_points(j: usize) -> Vec<usize> {
    let mut v = vec![0, 1];
    v.extend((0..5).map(|i| 2 + 5 * j + i));
    v
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanShape {
    pub core: CoreShape,
    pub leaves_per_core: usize,
    pub links: usize,
}

impl PlanShape {
    /// `3b + 124` leaves per core point and `35b + 11` link groups.
    pub fn full(b: usize) -> PlanShape {
        PlanShape {
            core: CoreShape::Jewels35,
            leaves_per_core: 3 * b + 124,
            links: 35 * b + 11,
        }
    }

    /// Triangle core, five leaves each, one link group: 22 points.
    pub fn reduced() -> PlanShape {
        PlanShape {
            core: CoreShape::Triangle3,
            leaves_per_core: 5,
            links: 1,
        }
    }

    pub fn point_count(&self) -> usize {
        let k = self.core.size();
        k + k * self.leaves_per_core + 4 * self.links
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkGroup {
    pub r: [PointId; 3],
    pub s: PointId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundOnePlan {
    pub shape: PlanShape,
    pub n: usize,
    pub core: Vec<PointId>,
    pub core_edges: Vec<Pair>,
    /// Leaves of each core point, ascending.
    pub leaves: Vec<Vec<PointId>>,
    pub links: Vec<LinkGroup>,
    /// Extra points tied to core points 0 and 1 by a triangle each.
    pub padding: Vec<PointId>,
}

impl RoundOnePlan {
    pub fn new(shape: PlanShape, padding: usize) -> RoundOnePlan {
        let k = shape.core.size();
        let l = shape.leaves_per_core;
        let core: Vec<PointId> = (0..k).map(PointId).collect();
        let core_edges = shape
            .core
            .edges()
            .into_iter()
            .map(|(a, b)| (PointId(a), PointId(b)))
            .collect();
        let leaves = (0..k)
            .map(|c| (0..l).map(|t| PointId(k + c * l + t)).collect())
            .collect();
        let base = k + k * l;
        let links = (0..shape.links)
            .map(|g| {
                let at = base + 4 * g;
                LinkGroup {
                    r: [PointId(at), PointId(at + 1), PointId(at + 2)],
                    s: PointId(at + 3),
                }
            })
            .collect();
        let start = shape.point_count();
        RoundOnePlan {
            shape,
            n: start + padding,
            core,
            core_edges,
            leaves,
            links,
            padding: (start..start + padding).map(PointId).collect(),
        }
    }

    /// Core edges, then leaf edges hub by hub, then `r_i s`, then padding.
    pub fn queries(&self) -> Vec<Pair> {
        let mut q = self.core_edges.clone();
        for (c, ls) in self.leaves.iter().enumerate() {
            q.extend(ls.iter().map(|&t| (PointId(c), t)));
        }
        for g in &self.links {
            q.extend(g.r.iter().map(|&r| (r, g.s)));
        }
        for &p in &self.padding {
            q.push((PointId(0), p));
            q.push((PointId(1), p));
        }
        q
    }

    pub fn annotate(&self, g: &mut Ppg) {
        for &p in &self.core {
            g.set_role(p, Role::Core);
        }
        for ls in &self.leaves {
            for &p in ls {
                g.set_role(p, Role::Leaf);
            }
        }
        for grp in &self.links {
            for &p in grp.r.iter().chain([&grp.s]) {
                g.set_role(p, Role::Link);
            }
        }
    }
}
