//! The two-round three-path algorithm and the triangle and quadrilateral
//! baselines, all driven against a [`DistanceOracle`].

mod plan;
mod select;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::conditions::{check_three_path, EdgeName, ThreePathLengths};
use crate::error::{Error, Result};
use crate::model::{Placement, PointId, Ppg, Round, ValenceState};
use crate::oracle::{DistanceOracle, Pair};
use crate::rational::{self, Rational};
use crate::rigidity::{Pins, Solver};

pub use plan::{
    jewel_edges, jewel_points, CoreShape, LinkGroup, PlanShape, RoundOnePlan, JEWELS, JEWEL_CORE,
    JEWEL_CORE_EDGES,
};
pub use select::{link_lengths, match_leftovers, select_leaf_edge, select_triplet, Leftover};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    ThreePath,
    Triangle,
    Quad,
}

/// The closed forms for the three-path algorithm at parameter `b`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedCounts {
    pub n: usize,
    pub round1: usize,
    pub round2: usize,
    pub total: usize,
}

impl ExpectedCounts {
    pub fn for_b(b: usize) -> ExpectedCounts {
        ExpectedCounts {
            n: 245 * b + 4419,
            round1: 210 * b + 4428,
            round2: 105 * b + 2187,
            total: 315 * b + 6615,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgorithmReport {
    pub algorithm: AlgorithmKind,
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    /// Points added on top of the construction, two round-1 queries each.
    pub padding: usize,
    pub round1: usize,
    pub round2: usize,
    pub total: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<ExpectedCounts>,
    pub components: usize,
    pub four_cycles: usize,
    pub triangles: usize,
    /// Largest valence spread seen after any attachment.
    pub max_spread: usize,
    pub final_valences: Vec<usize>,
    /// Every four-cycle's two hub edges have different lengths.
    pub four_cycle_conditions_ok: bool,
    /// Equal to the hidden placement, when the oracle has one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_hidden: Option<bool>,
    pub verified: bool,
    pub placement: Placement,
}

/// Known lengths keyed by unordered pair.
#[derive(Default)]
struct Lengths(HashMap<(usize, usize), Rational>);

impl Lengths {
    fn key(a: usize, b: usize) -> (usize, usize) {
        (a.min(b), a.max(b))
    }

    fn record(&mut self, batch: &[Pair], lens: Vec<Rational>) {
        for (&(a, b), l) in batch.iter().zip(lens) {
            self.0.insert(Self::key(a.0, b.0), l);
        }
    }

    fn get(&self, a: usize, b: usize) -> Rational {
        self.0[&Self::key(a, b)].clone()
    }
}

/// Solves the subgraph on `points` with the given pins; `None` unless the
/// solution is unique.
fn pinned_unique(
    points: &[usize],
    edges: &[(usize, usize)],
    lens: &Lengths,
    pins: &[(usize, &Rational)],
) -> Result<Option<Vec<Rational>>> {
    let local: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut g = Ppg::new(points.len());
    for &(a, b) in edges {
        g.add_edge(local[&a], local[&b], Round::First, lens.get(a, b))?;
    }
    let pins: Pins = pins
        .iter()
        .map(|&(p, x)| (PointId(local[&p]), x.clone()))
        .collect();
    let set = Solver::default()
        .with_cap(points.len())
        .with_limit(2)
        .solve(&g, &pins)?;
    Ok((set.len() == 1).then(|| set.placements[0].coords().to_vec()))
}

struct Assembly {
    x: Vec<Option<Rational>>,
}

impl Assembly {
    fn new(n: usize) -> Assembly {
        Assembly { x: vec![None; n] }
    }

    fn get(&self, p: usize) -> &Rational {
        self.x[p].as_ref().expect("assembled in dependency order")
    }

    /// Places the free points of a pinned piece, failing unless it is unique.
    fn piece(&mut self, what: &str, points: &[usize], edges: &[(usize, usize)], lens: &Lengths, pinned: &[usize]) -> Result<()> {
        let pins: Vec<(usize, Rational)> = pinned.iter().map(|&p| (p, self.get(p).clone())).collect();
        let refs: Vec<(usize, &Rational)> = pins.iter().map(|(p, x)| (*p, x)).collect();
        let sol = pinned_unique(points, edges, lens, &refs)?
            .ok_or_else(|| Error::VerificationFailed(format!("{what} is not rigid")))?;
        for (i, &p) in points.iter().enumerate() {
            self.x[p] = Some(sol[i].clone());
        }
        Ok(())
    }

    fn finish(self, g: &Ppg) -> Result<Placement> {
        let coords: Vec<Rational> = self
            .x
            .into_iter()
            .enumerate()
            .map(|(p, x)| x.ok_or_else(|| Error::VerificationFailed(format!("p{p} was never placed"))))
            .collect::<Result<_>>()?;
        let placement = Placement::literal(coords)
            .map_err(|e| Error::VerificationFailed(format!("assembled placement: {e}")))?;
        if !placement.satisfies(g) {
            return Err(Error::VerificationFailed(
                "assembled placement contradicts an answer".into(),
            ));
        }
        Ok(placement)
    }
}

fn compare_hidden(oracle: &dyn DistanceOracle, placement: &Placement) -> Option<bool> {
    oracle.hidden().map(|h| h.canonical() == placement.canonical())
}

/// The largest `b` with `245b + 4419 <= n`, and the points left over. Below
/// 4664 points the reduced 22-point plan is used instead (`b = None`).
pub fn shape_for_n(n: usize) -> Result<(PlanShape, Option<usize>, usize)> {
    if n >= 4664 {
        let b = (n - 4419) / 245;
        let shape = PlanShape::full(b);
        Ok((shape, Some(b), n - shape.point_count()))
    } else if n >= 22 {
        Ok((PlanShape::reduced(), None, n - 22))
    } else {
        Err(Error::InvalidConfig(format!(
            "the three-path algorithm needs at least 22 points, got {n}"
        )))
    }
}

/// Algorithm 1 at parameter `b >= 1`.
pub fn run_two_round(oracle: &mut dyn DistanceOracle, b: usize) -> Result<AlgorithmReport> {
    if b == 0 {
        return Err(Error::InvalidConfig("b must be at least 1".into()));
    }
    let mut rep = run_plan(oracle, RoundOnePlan::new(PlanShape::full(b), 0))?;
    rep.b = Some(b);
    rep.expected = Some(ExpectedCounts::for_b(b));
    Ok(rep)
}

/// Runs the construction on `plan`; the oracle must have `plan.n` points.
pub fn run_plan(oracle: &mut dyn DistanceOracle, plan: RoundOnePlan) -> Result<AlgorithmReport> {
    if oracle.n() != plan.n {
        return Err(Error::InvalidConfig(format!(
            "plan has {} points, oracle has {}",
            plan.n,
            oracle.n()
        )));
    }
    let mut lens = Lengths::default();
    let q1 = plan.queries();
    let a1 = oracle.answer_round(&q1)?;
    lens.record(&q1, a1);

    // the core is fixed after round 1
    let k = plan.core.len();
    let mut asm = Assembly::new(plan.n);
    let strut = lens.get(0, 1);
    asm.x[0] = Some(rational::int(0));
    asm.x[1] = Some(strut);
    match plan.shape.core {
        CoreShape::Jewels35 => {
            for j in 0..JEWELS {
                let mut e = vec![(0, 1)];
                e.extend(jewel_edges(j));
                asm.piece(&format!("jewel {j}"), &jewel_points(j), &e, &lens, &[0, 1])
                    .map_err(|_| Error::CoreNotRigid(j))?;
            }
            for t in 32..35 {
                asm.piece("core triangle", &[0, 1, t], &[(0, 1), (0, t), (1, t)], &lens, &[0, 1])?;
            }
        }
        CoreShape::Triangle3 => {
            asm.piece("core triangle", &[0, 1, 2], &[(0, 1), (0, 2), (1, 2)], &lens, &[0, 1])?;
        }
    }
    let core_x: Vec<Rational> = (0..k).map(|p| asm.get(p).clone()).collect();

    // round 2: components, then leftovers
    let mut valence = ValenceState::new(k);
    let mut max_spread = 0;
    let mut used = vec![false; plan.n];
    let leaf_lens: Vec<Vec<(PointId, Rational)>> = plan
        .leaves
        .iter()
        .enumerate()
        .map(|(c, ls)| ls.iter().map(|&q| (q, lens.get(c, q.0))).collect())
        .collect();
    let mut comps: Vec<([usize; 3], [usize; 3], LinkGroup)> = Vec::new();
    let mut q2: Vec<Pair> = Vec::new();
    for grp in &plan.links {
        let rs: [Rational; 3] = [0, 1, 2].map(|i| lens.get(grp.r[i].0, grp.s.0));
        let (p1, p2, p3) = select_triplet(&valence, &core_x, &rs)?;
        for p in [p1, p2, p3] {
            valence.attach(p);
            max_spread = max_spread.max(valence.spread());
        }
        let mut ctx = link_lengths(&rs);
        let gap = |a: usize, b: usize| rational::dist(&core_x[a], &core_x[b]);
        ctx.set(EdgeName::P1P2, gap(p1, p2));
        ctx.set(EdgeName::P2P3, gap(p2, p3));
        ctx.set(EdgeName::P1P3, gap(p1, p3));
        let mut qs = [0usize; 3];
        for (i, (&p, k)) in [p1, p2, p3].iter().zip([4u8, 5, 6]).enumerate() {
            let (q, len) = select_leaf_edge(p, &leaf_lens[p], &|q| used[q.0], k, &ctx)?;
            used[q.0] = true;
            ctx.set(EdgeName::PQ(i as u8 + 1), len);
            qs[i] = q.0;
        }
        for i in 0..3 {
            q2.push((PointId(qs[i]), grp.r[i]));
        }
        comps.push(([p1, p2, p3], qs, *grp));
    }

    let leftover: Vec<Leftover> = leaf_lens
        .iter()
        .enumerate()
        .flat_map(|(hub, ls)| {
            ls.iter()
                .filter(|(q, _)| !used[q.0])
                .map(move |(q, len)| Leftover {
                    hub,
                    leaf: *q,
                    len: len.clone(),
                })
        })
        .collect();
    let (pairs, odd) = match_leftovers(&leftover)?;
    for (a, b) in &pairs {
        q2.push((a.leaf, b.leaf));
    }
    let odd = odd.map(|o| {
        let other = (0..k).find(|&c| c != o.hub).expect("core has two points");
        q2.push((o.leaf, PointId(other)));
        (o, other)
    });
    let a2 = oracle.answer_round(&q2)?;
    lens.record(&q2, a2);

    // assembly
    let mut checks_ok = true;
    for (ps, qs, grp) in &comps {
        let pos = |i: usize| asm.get(ps[i]).clone();
        let mut map = std::collections::BTreeMap::new();
        map.insert(EdgeName::P1P2, rational::dist(&pos(0), &pos(1)));
        map.insert(EdgeName::P2P3, rational::dist(&pos(1), &pos(2)));
        map.insert(EdgeName::P1P3, rational::dist(&pos(0), &pos(2)));
        for i in 0..3 {
            let k = i as u8 + 1;
            map.insert(EdgeName::PQ(k), lens.get(ps[i], qs[i]));
            map.insert(EdgeName::QR(k), lens.get(qs[i], grp.r[i].0));
            map.insert(EdgeName::RS(k), lens.get(grp.r[i].0, grp.s.0));
        }
        if !check_three_path(&ThreePathLengths::new(map)?)?.is_empty() {
            checks_ok = false;
        }
        let mut points = ps.to_vec();
        points.extend(qs);
        points.extend(grp.r.iter().map(|r| r.0));
        points.push(grp.s.0);
        let mut edges = Vec::new();
        for i in 0..3 {
            edges.push((ps[i], qs[i]));
            edges.push((qs[i], grp.r[i].0));
            edges.push((grp.r[i].0, grp.s.0));
        }
        asm.piece("three-path component", &points, &edges, &lens, ps)?;
    }
    if !checks_ok {
        return Err(Error::VerificationFailed(
            "a component violates its rigidity conditions".into(),
        ));
    }
    let mut four_ok = true;
    for (a, b) in &pairs {
        four_ok &= crate::conditions::check_four_cycle(&a.len, &b.len);
        let pts = [a.hub, a.leaf.0, b.leaf.0, b.hub];
        let edges = [(a.hub, a.leaf.0), (a.leaf.0, b.leaf.0), (b.leaf.0, b.hub)];
        asm.piece("four-cycle", &pts, &edges, &lens, &[a.hub, b.hub])?;
    }
    if let Some((o, other)) = &odd {
        let pts = [o.hub, *other, o.leaf.0];
        asm.piece("leaf triangle", &pts, &[(o.hub, o.leaf.0), (*other, o.leaf.0)], &lens, &[o.hub, *other])?;
    }
    for &p in &plan.padding {
        asm.piece("padding triangle", &[0, 1, p.0], &[(0, p.0), (1, p.0)], &lens, &[0, 1])?;
    }

    let g = oracle.transcript().graph()?;
    let placement = asm.finish(&g)?;
    let matches_hidden = compare_hidden(oracle, &placement);
    Ok(AlgorithmReport {
        algorithm: AlgorithmKind::ThreePath,
        n: plan.n,
        b: None,
        padding: plan.padding.len(),
        round1: q1.len(),
        round2: q2.len(),
        total: q1.len() + q2.len(),
        expected: None,
        components: comps.len(),
        four_cycles: pairs.len(),
        triangles: usize::from(odd.is_some()),
        max_spread,
        final_valences: valence.valences().to_vec(),
        four_cycle_conditions_ok: four_ok,
        matches_hidden,
        verified: four_ok && matches_hidden != Some(false),
        placement: placement.canonical(),
    })
}

/// One round: `|p0 p1|`, then `|p0 pi|` and `|p1 pi|` for every other point.
pub fn run_triangle_baseline(oracle: &mut dyn DistanceOracle, n: usize) -> Result<AlgorithmReport> {
    if n < 2 || oracle.n() != n {
        return Err(Error::InvalidConfig(format!(
            "triangle baseline needs n >= 2 matching the oracle, got {n}"
        )));
    }
    let mut q = vec![(PointId(0), PointId(1))];
    for i in 2..n {
        q.push((PointId(0), PointId(i)));
        q.push((PointId(1), PointId(i)));
    }
    let mut lens = Lengths::default();
    let a = oracle.answer_round(&q)?;
    lens.record(&q, a);
    let mut asm = Assembly::new(n);
    asm.x[0] = Some(rational::int(0));
    asm.x[1] = Some(lens.get(0, 1));
    for i in 2..n {
        asm.piece("triangle", &[0, 1, i], &[(0, i), (1, i)], &lens, &[0, 1])?;
    }
    let g = oracle.transcript().graph()?;
    let placement = asm.finish(&g)?;
    let matches_hidden = compare_hidden(oracle, &placement);
    Ok(baseline_report(AlgorithmKind::Triangle, n, q.len(), 0, 0, n.saturating_sub(2), true, matches_hidden, placement))
}

/// Two hubs `p0`, `p1` joined in round 1, each with leaves. Round 2 closes a
/// four-cycle `p0 q q' p1` for each matched pair of leaves with different hub
/// edge lengths; the two unmatched leaves of `p1` get a triangle edge to `p0`.
/// With odd `n` one extra point is tied to both hubs in round 1.
pub fn run_quadrilateral_baseline(oracle: &mut dyn DistanceOracle, n: usize) -> Result<AlgorithmReport> {
    if n < 4 || oracle.n() != n {
        return Err(Error::InvalidConfig(format!(
            "quadrilateral baseline needs n >= 4 matching the oracle, got {n}"
        )));
    }
    let even = n - n % 2;
    let x = (even - 4) / 2;
    let hub0: Vec<usize> = (2..2 + x).collect();
    let hub1: Vec<usize> = (2 + x..even).collect();
    let mut q1 = vec![(PointId(0), PointId(1))];
    q1.extend(hub0.iter().map(|&v| (PointId(0), PointId(v))));
    q1.extend(hub1.iter().map(|&v| (PointId(1), PointId(v))));
    let extra = (n % 2 == 1).then_some(even);
    if let Some(e) = extra {
        q1.push((PointId(0), PointId(e)));
        q1.push((PointId(1), PointId(e)));
    }
    let mut lens = Lengths::default();
    let a1 = oracle.answer_round(&q1)?;
    lens.record(&q1, a1);

    // first fit: at most two leaves of p1 share a length, so three candidates
    // always leave one that differs
    let mut free: Vec<usize> = hub1.clone();
    let mut pairs = Vec::new();
    for &u in &hub0 {
        let lu = lens.get(0, u);
        let at = free
            .iter()
            .position(|&v| lens.get(1, v) != lu)
            .ok_or_else(|| Error::VerificationFailed(format!("no partner for leaf p{u}")))?;
        pairs.push((u, free.remove(at)));
    }
    let mut q2: Vec<Pair> = pairs.iter().map(|&(u, v)| (PointId(u), PointId(v))).collect();
    q2.extend(free.iter().map(|&v| (PointId(0), PointId(v))));
    let a2 = oracle.answer_round(&q2)?;
    lens.record(&q2, a2);

    let mut asm = Assembly::new(n);
    asm.x[0] = Some(rational::int(0));
    asm.x[1] = Some(lens.get(0, 1));
    let mut four_ok = true;
    for &(u, v) in &pairs {
        four_ok &= crate::conditions::check_four_cycle(&lens.get(0, u), &lens.get(1, v));
        asm.piece("four-cycle", &[0, u, v, 1], &[(0, u), (u, v), (v, 1)], &lens, &[0, 1])?;
    }
    for &v in free.iter().chain(extra.iter()) {
        asm.piece("triangle", &[0, 1, v], &[(0, v), (1, v)], &lens, &[0, 1])?;
    }
    let g = oracle.transcript().graph()?;
    let placement = asm.finish(&g)?;
    let matches_hidden = compare_hidden(oracle, &placement);
    let triangles = free.len() + extra.iter().count();
    let mut rep = baseline_report(
        AlgorithmKind::Quad,
        n,
        q1.len(),
        q2.len(),
        pairs.len(),
        triangles,
        four_ok,
        matches_hidden,
        placement,
    );
    rep.verified &= four_ok;
    Ok(rep)
}

#[allow(clippy::too_many_arguments)]
fn baseline_report(
    algorithm: AlgorithmKind,
    n: usize,
    round1: usize,
    round2: usize,
    four_cycles: usize,
    triangles: usize,
    four_ok: bool,
    matches_hidden: Option<bool>,
    placement: Placement,
) -> AlgorithmReport {
    AlgorithmReport {
        algorithm,
        n,
        b: None,
        padding: 0,
        round1,
        round2,
        total: round1 + round2,
        expected: None,
        components: 0,
        four_cycles,
        triangles,
        max_spread: 0,
        final_valences: Vec::new(),
        four_cycle_conditions_ok: four_ok,
        matches_hidden,
        verified: matches_hidden != Some(false),
        placement: placement.canonical(),
    }
}
