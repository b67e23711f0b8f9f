//! Exhaustive line-placement solver and layer-drawing enumeration.
//!
//! The solver fixes a spanning tree, walks the 2^(n-1) sign choices along tree
//! edges depth first and cuts a branch as soon as a non-tree edge or a repeated
//! coordinate rules it out. It is exponential on purpose: it is the ground truth
//! everything else is checked against.

mod layer;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{canonicalize, Placement, Ppg, PointId};
use crate::rational::{self, Rational};

pub use layer::{
    check_drawing_equivalence, enumerate_layer_drawings, Direction, LayerDrawing, EquivalenceReport,
};

pub const DEFAULT_CAP: usize = 24;

/// Brute-force size cap: `PPG_BRUTE_CAP` if set and valid, else 24.
pub fn default_cap() -> usize {
    std::env::var("PPG_BRUTE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

pub type Pins = BTreeMap<PointId, Rational>;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum TreeOrder {
    Bfs,
    Dfs,
    /// Random spanning tree grown from a seeded generator.
    Shuffled(u64),
}

/// Distinct solutions, sorted. Canonical unless at least two points were pinned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlacementSet {
    pub placements: Vec<Placement>,
    pub literal: bool,
}

impl PlacementSet {
    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    pub fn contains(&self, p: &Placement) -> bool {
        let key = if self.literal { p.clone() } else { p.canonical() };
        self.placements.binary_search(&key).is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct Solver {
    pub cap: usize,
    pub tree: TreeOrder,
    /// Stop after this many placements.
    pub limit: Option<usize>,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            cap: default_cap(),
            tree: TreeOrder::Bfs,
            limit: None,
        }
    }
}

/// One step of the tree walk: the point placed, its tree parent with the edge
/// length, and the already placed points it must also agree with.
struct Step {
    v: usize,
    parent: Option<(usize, Rational)>,
    checks: Vec<(usize, Rational)>,
}

impl Solver {
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_tree(mut self, tree: TreeOrder) -> Self {
        self.tree = tree;
        self
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn solve(&self, g: &Ppg, pins: &Pins) -> Result<PlacementSet> {
        let n = g.n();
        if n > self.cap {
            return Err(Error::InstanceTooLarge { n, cap: self.cap });
        }
        check_pins(n, pins)?;
        let literal = pins.len() >= 2;
        if n == 0 {
            return Ok(PlacementSet {
                placements: Vec::new(),
                literal,
            });
        }
        let comp = g.components();
        if let Some(p) = comp.iter().position(|&c| c != 0) {
            return Err(Error::UnderdeterminedGraph(p));
        }

        let root = pins.keys().next().map_or(0, |p| p.0);
        let steps = walk_order(g, root, self.tree);
        let mut pin_of: Vec<Option<&Rational>> = vec![None; n];
        for (p, x) in pins {
            pin_of[p.0] = Some(x);
        }

        let mut search = Search {
            steps: &steps,
            pins: &pin_of,
            coords: vec![None; n],
            placed: Vec::with_capacity(n),
            // without pins a placement and its mirror image are the same answer,
            // so the first tree edge may point right
            fix_first: pins.is_empty(),
            found: BTreeSet::new(),
            literal,
            limit: self.limit,
        };
        let start = pin_of[root].cloned().unwrap_or_else(|| rational::int(0));
        search.coords[root] = Some(start);
        search.placed.push(root);
        search.run(1)?;
        Ok(PlacementSet {
            placements: search.found.into_iter().collect(),
            literal,
        })
    }
}

fn check_pins(n: usize, pins: &Pins) -> Result<()> {
    let mut seen: BTreeMap<&Rational, PointId> = BTreeMap::new();
    for (p, x) in pins {
        if p.0 >= n {
            return Err(Error::UnknownPoint(p.0));
        }
        if let Some(q) = seen.insert(x, *p) {
            return Err(Error::InconsistentPins(format!(
                "{q} and {p} pinned to the same coordinate {}",
                rational::format(x)
            )));
        }
    }
    Ok(())
}

struct Search<'a> {
    steps: &'a [Step],
    pins: &'a [Option<&'a Rational>],
    coords: Vec<Option<Rational>>,
    placed: Vec<usize>,
    fix_first: bool,
    found: BTreeSet<Placement>,
    literal: bool,
    limit: Option<usize>,
}

impl Search<'_> {
    fn full(&self) -> bool {
        self.limit.is_some_and(|l| self.found.len() >= l)
    }

    fn run(&mut self, i: usize) -> Result<()> {
        if self.full() {
            return Ok(());
        }
        if i == self.steps.len() {
            let raw: Vec<Rational> = self.coords.iter().map(|c| c.clone().unwrap()).collect();
            let p = if self.literal {
                Placement::literal(raw)?
            } else {
                canonicalize(&raw)?
            };
            self.found.insert(p);
            return Ok(());
        }
        let step = &self.steps[i];
        let (parent, len) = step.parent.as_ref().expect("only the root has no parent");
        let base = self.coords[*parent].clone().unwrap();
        let signs: &[bool] = if self.fix_first && i == 1 {
            &[true]
        } else {
            &[true, false]
        };
        for &plus in signs {
            let x = if plus { &base + len } else { &base - len };
            if !self.admissible(step, &x) {
                continue;
            }
            self.coords[step.v] = Some(x);
            self.placed.push(step.v);
            self.run(i + 1)?;
            self.placed.pop();
            self.coords[step.v] = None;
        }
        Ok(())
    }

    fn admissible(&self, step: &Step, x: &Rational) -> bool {
        if let Some(pin) = self.pins[step.v] {
            if pin != x {
                return false;
            }
        }
        for (w, len) in &step.checks {
            if &rational::dist(self.coords[*w].as_ref().unwrap(), x) != len {
                return false;
            }
        }
        self.placed
            .iter()
            .all(|&w| self.coords[w].as_ref().unwrap() != x)
    }
}

/// Spanning-tree visiting order from `root`; each later point lists its parent
/// edge and the non-tree edges back to points placed before it.
fn walk_order(g: &Ppg, root: usize, tree: TreeOrder) -> Vec<Step> {
    let n = g.n();
    let adj = g.adjacency();
    let edges = g.edges();
    let mut order: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    seen[root] = true;
    match tree {
        TreeOrder::Bfs => {
            let mut queue = VecDeque::from([(root, None)]);
            while let Some((v, via)) = queue.pop_front() {
                order.push((v, via));
                for &(w, e) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back((w, Some(e)));
                    }
                }
            }
        }
        TreeOrder::Dfs => {
            let mut stack = vec![(root, None)];
            seen[root] = false;
            while let Some((v, via)) = stack.pop() {
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                order.push((v, via));
                for &(w, e) in adj[v].iter().rev() {
                    if !seen[w] {
                        stack.push((w, Some(e)));
                    }
                }
            }
        }
        TreeOrder::Shuffled(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            order.push((root, None));
            let mut frontier: Vec<(usize, usize)> = adj[root].iter().map(|&(w, e)| (w, e)).collect();
            while !frontier.is_empty() {
                frontier.shuffle(&mut rng);
                let (w, e) = frontier.pop().unwrap();
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                order.push((w, Some(e)));
                frontier.extend(adj[w].iter().filter(|&&(u, _)| !seen[u]).copied());
            }
        }
    }

    let mut rank = vec![usize::MAX; n];
    for (i, &(v, _)) in order.iter().enumerate() {
        rank[v] = i;
    }
    order
        .iter()
        .map(|&(v, via)| {
            let parent = via.map(|e| (edges[e].other(PointId(v)).0, edges[e].length.clone()));
            let checks = adj[v]
                .iter()
                .filter(|&&(w, e)| rank[w] < rank[v] && Some(e) != via)
                .map(|&(w, e)| (w, edges[e].length.clone()))
                .collect();
            Step { v, parent, checks }
        })
        .collect()
}

/// All distinct-coordinate placements of `g`, canonical unless two or more
/// points are pinned (then literal).
pub fn solve_all_placements(g: &Ppg, pins: Option<&Pins>) -> Result<PlacementSet> {
    Solver::default().solve(g, pins.unwrap_or(&Pins::new()))
}

pub fn is_line_rigid(g: &Ppg) -> Result<bool> {
    let found = Solver::default().with_limit(2).solve(g, &Pins::new())?;
    Ok(found.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Round;
    use crate::rational::int;

    fn graph(n: usize, edges: &[(usize, usize, i64)]) -> Ppg {
        Ppg::with_edges(n, edges.iter().map(|&(a, b, l)| (a, b, Round::First, int(l)))).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn collinear_triangle_is_unique() {
        let g = graph(3, &[(0, 1, 5), (0, 2, 2), (1, 2, 3)]);
        let s = solve_all_placements(&g, None).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.placements[0].coords(), &ints(&[0, 5, 2])[..]);
    }

    #[test]
    fn rectangle_four_cycle_has_two() {
        let g = graph(4, &[(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)]);
        let s = solve_all_placements(&g, None).unwrap();
        assert_eq!(s.len(), 2);
        assert!(!is_line_rigid(&g).unwrap());
    }

    #[test]
    fn unit_path_mirror_is_discarded() {
        let g = graph(3, &[(0, 1, 1), (1, 2, 1)]);
        let s = solve_all_placements(&g, None).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.placements[0].coords(), &ints(&[0, 1, 2])[..]);
    }

    #[test]
    fn errors() {
        let g = graph(3, &[(0, 1, 1)]);
        assert!(matches!(
            solve_all_placements(&g, None),
            Err(Error::UnderdeterminedGraph(2))
        ));
        let big = Ppg::new(30);
        assert!(matches!(
            Solver::default().with_cap(24).solve(&big, &Pins::new()),
            Err(Error::InstanceTooLarge { n: 30, cap: 24 })
        ));
        let tri = graph(3, &[(0, 1, 5), (0, 2, 2), (1, 2, 3)]);
        let pins = Pins::from([(PointId(0), int(1)), (PointId(1), int(1))]);
        assert!(matches!(
            solve_all_placements(&tri, Some(&pins)),
            Err(Error::InconsistentPins(_))
        ));
    }

    #[test]
    fn two_pins_give_literal_solution() {
        let g = graph(3, &[(0, 1, 5), (0, 2, 2), (1, 2, 3)]);
        let pins = Pins::from([(PointId(0), int(10)), (PointId(1), int(5))]);
        let s = solve_all_placements(&g, Some(&pins)).unwrap();
        assert!(s.literal);
        assert_eq!(s.placements, vec![Placement::literal(ints(&[10, 5, 8])).unwrap()]);
        let wrong = Pins::from([(PointId(0), int(0)), (PointId(1), int(4))]);
        assert!(solve_all_placements(&g, Some(&wrong)).unwrap().is_empty());
    }

    #[test]
    fn tree_choice_does_not_matter() {
        let g = graph(
            6,
            &[(0, 1, 3), (1, 2, 4), (2, 3, 3), (3, 0, 4), (3, 4, 2), (4, 5, 1), (5, 0, 5), (1, 4, 6)],
        );
        let base = solve_all_placements(&g, None).unwrap();
        for tree in [TreeOrder::Dfs, TreeOrder::Shuffled(1), TreeOrder::Shuffled(99)] {
            let s = Solver::default().with_tree(tree).solve(&g, &Pins::new()).unwrap();
            assert_eq!(s, base);
        }
    }

    #[test]
    fn single_point_and_edge() {
        assert_eq!(solve_all_placements(&Ppg::new(1), None).unwrap().len(), 1);
        assert!(is_line_rigid(&graph(2, &[(0, 1, 7)])).unwrap());
    }
}
