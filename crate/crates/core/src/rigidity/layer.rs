//! Layer drawings: axis-parallel plane drawings of a ppg whose two diagonal
//! folds `x + y` and `x - y` are two genuinely different line placements.
//!
//! Drawings are enumerated modulo the symmetries of the square: the first tree
//! edge is always drawn horizontally, pointing right.

use serde::Serialize;

use super::{walk_order, Step, TreeOrder};
use crate::error::{Error, Result};
use crate::model::{canonicalize, Placement, Ppg};
use crate::rational::{self, Rational};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDrawing {
    /// Indexed like `Ppg::edges`.
    pub directions: Vec<Direction>,
    pub coords: Vec<(Rational, Rational)>,
}

impl LayerDrawing {
    /// The placements read off along `x + y` and `x - y`.
    pub fn folds(&self) -> (Placement, Placement) {
        let plus = self.coords.iter().map(|(x, y)| x + y).collect();
        let minus = self.coords.iter().map(|(x, y)| x - y).collect();
        (
            Placement::literal(plus).expect("accepted drawings have distinct folds"),
            Placement::literal(minus).expect("accepted drawings have distinct folds"),
        )
    }
}

const MOVES: [(Direction, bool); 4] = [
    (Direction::Horizontal, true),
    (Direction::Horizontal, false),
    (Direction::Vertical, true),
    (Direction::Vertical, false),
];

struct Walk<'a> {
    g: &'a Ppg,
    steps: Vec<Step>,
    coords: Vec<Option<(Rational, Rational)>>,
    placed: Vec<usize>,
    out: Vec<LayerDrawing>,
    limit: usize,
}

impl Walk<'_> {
    fn run(&mut self, i: usize) {
        if self.out.len() >= self.limit {
            return;
        }
        if i == self.steps.len() {
            if let Some(d) = self.finish() {
                self.out.push(d);
            }
            return;
        }
        let (v, parent, len) = {
            let s = &self.steps[i];
            let (p, l) = s.parent.as_ref().unwrap();
            (s.v, *p, l.clone())
        };
        let (px, py) = self.coords[parent].clone().unwrap();
        let moves = if i == 1 { &MOVES[..1] } else { &MOVES[..] };
        for &(dir, plus) in moves {
            let d = if plus { len.clone() } else { -len.clone() };
            let at = match dir {
                Direction::Horizontal => (&px + &d, py.clone()),
                Direction::Vertical => (px.clone(), &py + &d),
            };
            if !self.admissible(i, &at) {
                continue;
            }
            self.coords[v] = Some(at);
            self.placed.push(v);
            self.run(i + 1);
            self.placed.pop();
            self.coords[v] = None;
        }
    }

    fn admissible(&self, i: usize, at: &(Rational, Rational)) -> bool {
        for (w, len) in &self.steps[i].checks {
            let (wx, wy) = self.coords[*w].as_ref().unwrap();
            let dx = rational::dist(wx, &at.0);
            let dy = rational::dist(wy, &at.1);
            let zero = rational::int(0);
            if !((dx == zero && &dy == len) || (dy == zero && &dx == len)) {
                return false;
            }
        }
        let plus = &at.0 + &at.1;
        let minus = &at.0 - &at.1;
        self.placed.iter().all(|&w| {
            let (wx, wy) = self.coords[w].as_ref().unwrap();
            wx + wy != plus && wx - wy != minus
        })
    }

    fn finish(&self) -> Option<LayerDrawing> {
        let coords: Vec<(Rational, Rational)> =
            self.coords.iter().map(|c| c.clone().unwrap()).collect();
        let directions: Vec<Direction> = self
            .g
            .edges()
            .iter()
            .map(|e| {
                if coords[e.a.0].0 == coords[e.b.0].0 {
                    Direction::Vertical
                } else {
                    Direction::Horizontal
                }
            })
            .collect();
        let both = directions.contains(&Direction::Horizontal)
            && directions.contains(&Direction::Vertical);
        if !both {
            return None;
        }
        let plus: Vec<Rational> = coords.iter().map(|(x, y)| x + y).collect();
        let minus: Vec<Rational> = coords.iter().map(|(x, y)| x - y).collect();
        if canonicalize(&plus).ok()? == canonicalize(&minus).ok()? {
            return None;
        }
        Some(LayerDrawing { directions, coords })
    }
}

/// Up to `limit` layer drawings of `g`. Empty iff `g` is line rigid.
pub fn enumerate_layer_drawings(g: &Ppg, limit: usize, cap: usize) -> Result<Vec<LayerDrawing>> {
    let n = g.n();
    if n > cap {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    if let Some(p) = g.components().iter().position(|&c| c != 0) {
        return Err(Error::UnderdeterminedGraph(p));
    }
    let steps = walk_order(g, 0, TreeOrder::Bfs);
    let mut walk = Walk {
        g,
        steps,
        coords: vec![None; n],
        placed: vec![0],
        out: Vec::new(),
        limit,
    };
    walk.coords[0] = Some((rational::int(0), rational::int(0)));
    walk.run(1);
    Ok(walk.out)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub rigid: bool,
    pub has_drawing: bool,
    pub consistent: bool,
}

/// Runs the solver and the drawing search independently and compares them.
pub fn check_drawing_equivalence(g: &Ppg, cap: usize) -> Result<EquivalenceReport> {
    let solver = super::Solver::default().with_cap(cap).with_limit(2);
    let rigid = solver.solve(g, &super::Pins::new())?.len() == 1;
    let has_drawing = !enumerate_layer_drawings(g, 1, cap)?.is_empty();
    Ok(EquivalenceReport {
        rigid,
        has_drawing,
        consistent: rigid != has_drawing,
    })
}
