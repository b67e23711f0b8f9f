//! Maximal degree-2 paths, the path-length bound for rigid two-round graphs,
//! the five two-placement attacks on a 6-cycle, and density accounting.

mod attacks;
mod density;

use serde::Serialize;

use crate::model::{PointId, Ppg, Round};

pub use attacks::{attack_table, attack_table_with, Attack, AttackParams};
pub use density::{
    density, heavy_group_density, type_a_density, DensityReport, GroupKind, GroupShare,
};

/// Chain `start, nodes..., end` where every node in `nodes` has degree 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degree2Path {
    pub start: PointId,
    pub end: PointId,
    pub start_degree: usize,
    pub end_degree: usize,
    pub nodes: Vec<PointId>,
    /// Round of each of the `nodes.len() + 1` edges, from `start` to `end`.
    pub rounds: Vec<u8>,
}

impl Degree2Path {
    pub fn k(&self) -> usize {
        self.nodes.len()
    }

    /// `start, nodes..., end`
    pub fn chain(&self) -> Vec<PointId> {
        let mut v = vec![self.start];
        v.extend(&self.nodes);
        v.push(self.end);
        v
    }

    /// Longest run of consecutive round-1 edges.
    pub fn max_first_round_run(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        for &r in &self.rounds {
            run = if r == 1 { run + 1 } else { 0 };
            best = best.max(run);
        }
        best
    }

    pub fn has_second_round_edge(&self) -> bool {
        self.rounds.contains(&2)
    }
}

/// A connected component in which every point has degree 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degree2Cycle {
    pub nodes: Vec<PointId>,
    pub rounds: Vec<u8>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Degree2Paths {
    pub paths: Vec<Degree2Path>,
    pub cycles: Vec<Degree2Cycle>,
}

/// Maximal degree-2 paths of `G_1` or `G_2`, including bare edges between
/// points of other degrees (`k = 0`). Pure cycles are listed separately.
pub fn extract_degree2_paths(g: &Ppg, round: Round) -> Degree2Paths {
    let view = g.round_view(round);
    let adj = view.adjacency();
    let deg = view.degrees();
    let edges = view.edges();
    let mut used = vec![false; edges.len()];
    let mut out = Degree2Paths::default();

    for start in 0..view.n() {
        if deg[start] == 2 || deg[start] == 0 {
            continue;
        }
        for &(first, e0) in &adj[start] {
            if used[e0] {
                continue;
            }
            used[e0] = true;
            let mut nodes = Vec::new();
            let mut rounds = vec![edges[e0].round.number()];
            let mut cur = first;
            while deg[cur] == 2 {
                nodes.push(PointId(cur));
                let &(next, e) = adj[cur]
                    .iter()
                    .find(|&&(_, e)| !used[e])
                    .expect("degree-2 point has a second edge");
                used[e] = true;
                rounds.push(edges[e].round.number());
                cur = next;
            }
            out.paths.push(Degree2Path {
                start: PointId(start),
                end: PointId(cur),
                start_degree: deg[start],
                end_degree: deg[cur],
                nodes,
                rounds,
            });
        }
    }

    for s in 0..view.n() {
        if deg[s] != 2 {
            continue;
        }
        let Some(&(_, e0)) = adj[s].iter().find(|&&(_, e)| !used[e]) else {
            continue;
        };
        let mut nodes = vec![PointId(s)];
        let mut rounds = Vec::new();
        let mut cur = s;
        let mut e = e0;
        loop {
            used[e] = true;
            rounds.push(edges[e].round.number());
            cur = edges[e].other(PointId(cur)).0;
            if cur == s {
                break;
            }
            nodes.push(PointId(cur));
            e = adj[cur].iter().find(|&&(_, f)| !used[f]).expect("cycle continues").1;
        }
        out.cycles.push(Degree2Cycle { nodes, rounds });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degree2Report {
    pub ok: bool,
    pub max_k: usize,
    pub offending: Vec<Degree2Path>,
    pub cycles: usize,
}

/// A final two-round graph passes when every maximal degree-2 path has at most
/// 3 points, and every such path with a round-2 edge has at most 2 consecutive
/// round-1 edges.
pub fn check_degree2_paths(g2: &Ppg) -> Degree2Report {
    let found = extract_degree2_paths(g2, Round::Second);
    let offending: Vec<Degree2Path> = found
        .paths
        .iter()
        .filter(|p| p.k() > 3 || (p.has_second_round_edge() && p.max_first_round_run() > 2))
        .cloned()
        .collect();
    Degree2Report {
        ok: offending.is_empty(),
        max_k: found.paths.iter().map(Degree2Path::k).max().unwrap_or(0),
        offending,
        cycles: found.cycles.len(),
    }
}
