//! Graphviz output. Round-1 edges are solid, round-2 edges dashed.

use std::fmt::Write;

use num_traits::ToPrimitive;

use crate::model::{Placement, Ppg, Round};
use crate::rational;
use crate::rigidity::{Direction, LayerDrawing};

fn coord(x: &rational::Rational) -> String {
    format!("{:.6}", x.to_f64().unwrap_or(f64::NAN))
}

/// Deterministic DOT text; with a placement, nodes carry `pos="x,0!"`.
pub fn export_dot(g: &Ppg, placement: Option<&Placement>) -> String {
    let mut out = String::from("graph ppg {\n");
    if g.n() > 0 {
        out.push_str("  node [shape=circle];\n");
    }
    for v in 0..g.n() {
        let _ = write!(out, "  p{v}");
        match placement {
            Some(p) => {
                let x = p.coords().get(v).expect("placement covers the graph");
                let _ = writeln!(
                    out,
                    " [xlabel=\"{}\", pos=\"{},0!\"];",
                    rational::format(x),
                    coord(x)
                );
            }
            None => out.push_str(";\n"),
        }
    }
    for e in g.edges() {
        let style = match e.round {
            Round::First => "solid",
            Round::Second => "dashed",
        };
        let _ = writeln!(
            out,
            "  {} -- {} [label=\"{}\", style={style}];",
            e.a,
            e.b,
            rational::format(&e.length)
        );
    }
    out.push_str("}\n");
    out
}

/// A layer drawing with 2-D node positions and an edge `direction` attribute.
pub fn export_layer_dot(g: &Ppg, d: &LayerDrawing) -> String {
    let mut out = String::from("graph layer {\n  node [shape=circle];\n");
    for (v, (x, y)) in d.coords.iter().enumerate() {
        let _ = writeln!(out, "  p{v} [pos=\"{},{}!\"];", coord(x), coord(y));
    }
    for (e, dir) in g.edges().iter().zip(&d.directions) {
        let dir = match dir {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
        };
        let _ = writeln!(
            out,
            "  {} -- {} [label=\"{}\", direction={dir}];",
            e.a,
            e.b,
            rational::format(&e.length)
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn triangle() {
        let g = Ppg::with_edges(
            3,
            [(0, 1, 5), (0, 2, 2), (1, 2, 3)].map(|(a, b, l)| (a, b, Round::First, int(l))),
        )
        .unwrap();
        let s = export_dot(&g, None);
        assert_eq!(s.matches(" -- ").count(), 3);
        assert_eq!(s.matches("style=solid").count(), 3);
        assert_eq!(s, export_dot(&g, None));
    }

    #[test]
    fn empty_graph() {
        assert_eq!(export_dot(&Ppg::new(0), None), "graph ppg {\n}\n");
    }

    #[test]
    fn positions_and_rounds() {
        let g = Ppg::with_edges(
            3,
            [(0, 1, Round::First, int(2)), (1, 2, Round::Second, int(3))],
        )
        .unwrap();
        let p = Placement::literal(vec![int(0), int(2), int(5)]).unwrap();
        let s = export_dot(&g, Some(&p));
        assert!(s.contains("pos=\"5.000000,0!\""));
        assert!(s.contains("style=dashed"));
    }
}
