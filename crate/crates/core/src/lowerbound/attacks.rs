//! Length recipes that keep the 6-cycle `p0 p1 p2 p3 p4 p5` ambiguous when the
//! path `p1..p4` between the anchors `p0`, `p5` has four degree-2 nodes.
//!
//! Each recipe fixes the five path edges `p0p1, p1p2, p2p3, p3p4, p4p5`; the
//! closing edge `p5p0` has length `l`. The equal-length class `c`, a generic
//! round-1 length `a` and a second generic length `g` are free parameters.

use serde::Serialize;

use crate::model::{Ppg, Round};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttackParams {
    #[serde(with = "rational::serde_str")]
    pub c: Rational,
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub g: Rational,
    #[serde(with = "rational::serde_str")]
    pub l: Rational,
}

impl Default for AttackParams {
    fn default() -> Self {
        AttackParams {
            c: rational::int(1),
            a: rational::ratio(5, 2),
            g: rational::ratio(7, 3),
            l: rational::int(10),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Attack {
    pub name: &'static str,
    /// Round of `p0p1, p1p2, p2p3, p3p4, p4p5`.
    pub pattern: [u8; 5],
    /// The relations the round-2 answers are chosen to satisfy.
    pub relation: &'static str,
    /// `p0p1, p1p2, p2p3, p3p4, p4p5, p5p0`
    #[serde(with = "rational::serde_str_vec")]
    pub lengths: Vec<Rational>,
}

impl Attack {
    /// The 6-cycle on points `0..6`, closing edge in round 1.
    pub fn cycle(&self) -> Ppg {
        let mut g = Ppg::new(6);
        for i in 0..6 {
            let round = match self.pattern.get(i) {
                Some(2) => Round::Second,
                _ => Round::First,
            };
            g.add_edge(i, (i + 1) % 6, round, self.lengths[i].clone())
                .expect("recipe lengths are positive");
        }
        g
    }
}

pub fn attack_table_with(p: &AttackParams) -> Vec<Attack> {
    let AttackParams { c, a, g, l } = p;
    let mk = |name, pattern, relation, five: [Rational; 5]| {
        let mut lengths = five.to_vec();
        lengths.push(l.clone());
        Attack {
            name,
            pattern,
            relation,
            lengths,
        }
    };
    vec![
        mk(
            "E2 E1 E2 E1 E1",
            [2, 1, 2, 1, 1],
            "|p0p5| = |p1p2| + |p2p3|, |p0p1| = |p4p5| - |p3p4|",
            [g - c, a.clone(), l - a, c.clone(), g.clone()],
        ),
        mk(
            "E2 E1 E1 E2 E1",
            [2, 1, 1, 2, 1],
            "|p0p1| = |p2p3|, |p3p4| = |p4p5| + |p5p0| - |p1p2|",
            [a.clone(), c.clone(), a.clone(), l + g - c, g.clone()],
        ),
        mk(
            "E1 E2 E1 E2 E1",
            [1, 2, 1, 2, 1],
            "|p1p2| = |p5p0| - |p2p3| - |p4p5|, |p3p4| = |p0p1|",
            [a.clone(), l - c - g, c.clone(), a.clone(), g.clone()],
        ),
        mk(
            "E1 E1 E2 E2 E1",
            [1, 1, 2, 2, 1],
            "|p2p3| = |p5p0| - |p0p1| - |p4p5|, |p3p4| = |p1p2|",
            [a.clone(), c.clone(), l - a - g, c.clone(), g.clone()],
        ),
        mk(
            "E1 E1 E2 E1 E1",
            [1, 1, 2, 1, 1],
            "|p1p2| = |p3p4| = c, |p2p3| = |p4p5| + |p5p0| + |p0p1|",
            [a.clone(), c.clone(), g + l + a, c.clone(), g.clone()],
        ),
    ]
}

/// The five round patterns of a 4-node degree-2 path with their recipes at
/// `c = 1, a = 5/2, g = 7/3, l = 10`.
pub fn attack_table() -> Vec<Attack> {
    attack_table_with(&AttackParams::default())
}
