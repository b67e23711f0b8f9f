//! The two-round lower-bound adversary.
//!
//! Round 1 commits to one concrete layout shaped by the topology of `G_1`:
//! heavy nodes (degree >= 3) sit far apart, degree-2 chains between heavy
//! nodes zigzag in blocks of three edges whose first and third lengths agree,
//! pendant and isolated chains alternate the shared length `c` with a generic
//! one, and the remaining lengths are generic. Round 2 looks for a window of
//! consecutive edges along a degree-2 chain of `G_2` that can be walked with
//! two different sign patterns between the same fixed endpoints, choosing the
//! unknown round-2 lengths to make both walks close. If one exists the answers
//! come from one of the two layouts and the other stays consistent too.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_batch, DistanceOracle, Pair, Transcript};
use crate::error::{Error, Result};
use crate::lowerbound::extract_degree2_paths;
use crate::model::{Placement, PointId, Ppg, Round};
use crate::rational::{self, Rational};
use crate::rigidity::{default_cap, Pins, Solver};

const GRAIN: i64 = 1_000_003;
const ATTEMPTS: usize = 32;
const MAX_WINDOW: usize = 7;

/// What the adversary has committed to.
#[derive(Clone, Debug, Default)]
pub struct AdversaryState {
    /// Shared length of the equal-length class.
    pub c: Rational,
    /// Round-1 layout; empty until round 1 is answered.
    pub committed: Vec<Rational>,
    /// A second layout agreeing with every answer, once round 2 found one.
    pub alternate: Option<Vec<Rational>>,
    /// Endpoints of chain windows whose interior can still be flipped.
    pub pending_ambiguities: Vec<Pair>,
    /// The window used in round 2, endpoints included.
    pub exploit: Option<Vec<PointId>>,
}

#[derive(Clone, Debug)]
pub struct AdversaryOracle {
    n: usize,
    seed: u64,
    rng: ChaCha8Rng,
    g1: Option<Ppg>,
    /// Layout the round-2 answers were read from.
    answered_from: Vec<Rational>,
    state: AdversaryState,
    transcript: Transcript,
}

impl AdversaryOracle {
    pub fn new(n: usize, seed: u64) -> AdversaryOracle {
        AdversaryOracle {
            n,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            g1: None,
            answered_from: Vec::new(),
            state: AdversaryState {
                c: rational::int(1),
                ..Default::default()
            },
            transcript: Transcript::new(n),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn state(&self) -> &AdversaryState {
        &self.state
    }

    /// A layout consistent with every answer so far.
    pub fn consistent_layout(&self) -> Option<&[Rational]> {
        match self.transcript.rounds.len() {
            0 => None,
            1 => Some(&self.state.committed),
            _ => Some(&self.answered_from),
        }
    }

    fn round1(&mut self, batch: &[Pair]) -> Result<Vec<Rational>> {
        let mut g1 = Ppg::new(self.n);
        for &(a, b) in batch {
            g1.add_edge(a.0, b.0, Round::First, rational::int(1))?;
        }
        let (pos, pending) = layout_round1(&g1, &self.state.c, &mut self.rng)?;
        let lens = batch
            .iter()
            .map(|&(a, b)| rational::dist(&pos[a.0], &pos[b.0]))
            .collect();
        self.state.committed = pos;
        self.state.pending_ambiguities = pending;
        self.g1 = Some(g1);
        Ok(lens)
    }

    fn round2(&mut self, batch: &[Pair]) -> Result<Vec<Rational>> {
        let g1 = self.g1.as_ref().expect("round 1 answered");
        let p1 = &self.state.committed;
        // topology of G_2, with the round-1 lengths filled in
        let mut g2 = Ppg::new(self.n);
        for e in g1.edges() {
            g2.add_edge(e.a.0, e.b.0, Round::First, rational::dist(&p1[e.a.0], &p1[e.b.0]))?;
        }
        for &(a, b) in batch {
            if g2.edge(a, b).is_none() {
                g2.add_edge(a.0, b.0, Round::Second, rational::int(1))?;
            }
        }
        let found = find_exploit(&g2, p1, &self.state.c, &mut self.rng);
        let x = match found {
            Some(ex) => {
                self.state.alternate = Some(ex.y);
                self.state.exploit = Some(ex.window);
                ex.x
            }
            None => p1.clone(),
        };
        let lens = batch
            .iter()
            .map(|&(a, b)| rational::dist(&x[a.0], &x[b.0]))
            .collect();
        self.answered_from = x;
        Ok(lens)
    }
}

impl DistanceOracle for AdversaryOracle {
    fn n(&self) -> usize {
        self.n
    }

    fn answer_round(&mut self, batch: &[Pair]) -> Result<Vec<Rational>> {
        check_batch(self.n, batch)?;
        let lens = match self.transcript.rounds.len() {
            0 => self.round1(batch)?,
            1 => self.round2(batch)?,
            r => {
                return Err(Error::Protocol(format!(
                    "the adversary answers two rounds, got round {}",
                    r + 1
                )))
            }
        };
        self.transcript.record(batch, &lens);
        Ok(lens)
    }

    fn transcript(&self) -> &Transcript {
        &self.transcript
    }
}

/// Uniform in the open interval `(lo·c, hi·c)` on a fine grid.
fn draw(rng: &mut ChaCha8Rng, c: &Rational, lo: i64, hi: i64) -> Rational {
    let k: i64 = rng.gen_range(1..GRAIN);
    let span = rational::int(hi - lo);
    c * (rational::int(lo) + span * rational::ratio(k, GRAIN))
}

fn generic(rng: &mut ChaCha8Rng, c: &Rational) -> Rational {
    draw(rng, c, 2, 3)
}

fn sign_of(x: &Rational) -> Rational {
    if x.is_negative() {
        rational::int(-1)
    } else {
        rational::int(1)
    }
}

struct Layout<'a> {
    c: &'a Rational,
    pos: Vec<Option<Rational>>,
    taken: BTreeSet<Rational>,
}

impl Layout<'_> {
    /// Places `nodes` at `at` if all are free and mutually distinct.
    fn place(&mut self, nodes: &[usize], at: &[Rational]) -> bool {
        let fresh: BTreeSet<&Rational> = at.iter().collect();
        if fresh.len() != at.len() || at.iter().any(|x| self.taken.contains(x)) {
            return false;
        }
        for (&v, x) in nodes.iter().zip(at) {
            self.pos[v] = Some(x.clone());
            self.taken.insert(x.clone());
        }
        true
    }

    fn at(&self, v: usize) -> Rational {
        self.pos[v].clone().expect("anchor placed first")
    }
}

/// Lays out `G_1`; also returns the windows whose interior can be flipped.
fn layout_round1(
    g1: &Ppg,
    c: &Rational,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Rational>, Vec<Pair>)> {
    for _ in 0..ATTEMPTS {
        if let Some(done) = try_layout(g1, c, rng) {
            return Ok(done);
        }
    }
    Err(Error::InconsistentStrategy(
        "no distinct round-1 layout found".into(),
    ))
}

fn try_layout(g1: &Ppg, c: &Rational, rng: &mut ChaCha8Rng) -> Option<(Vec<Rational>, Vec<Pair>)> {
    let n = g1.n();
    let deg = g1.degrees();
    let space = c * rational::int(16 * (n as i64 + 2));
    let mut lay = Layout {
        c,
        pos: vec![None; n],
        taken: BTreeSet::new(),
    };
    let mut pending = Vec::new();

    let heavy: Vec<usize> = (0..n).filter(|&v| deg[v] >= 3).collect();
    for (j, &h) in heavy.iter().enumerate() {
        let x = &space * rational::int(j as i64) + draw(rng, c, 0, 1);
        if !lay.place(&[h], &[x]) {
            return None;
        }
    }
    let mut region = heavy.len() as i64 + 1;
    let mut far = |space: &Rational| {
        region += 1;
        space * rational::int(region)
    };

    let found = extract_degree2_paths(g1, Round::First);
    let mut pendants: BTreeMap<usize, usize> = BTreeMap::new();
    for p in &found.paths {
        match (deg[p.start.0] >= 3, deg[p.end.0] >= 3) {
            (true, false) => *pendants.entry(p.start.0).or_default() += 1,
            (false, true) => *pendants.entry(p.end.0).or_default() += 1,
            _ => {}
        }
    }
    let mut flip: BTreeMap<usize, bool> = BTreeMap::new();

    for p in &found.paths {
        let chain: Vec<usize> = p.chain().iter().map(|v| v.0).collect();
        let (hs, he) = (deg[chain[0]] >= 3, deg[*chain.last().unwrap()] >= 3);
        if hs && he {
            let s4 = |v: usize| deg[v] == 3 && pendants.get(&v) == Some(&2);
            let short = chain.len() == 3;
            if short && s4(chain[2]) && !s4(chain[0]) {
                let rev: Vec<usize> = chain.iter().rev().copied().collect();
                if !between_heavy(&mut lay, &rev, true, rng, &mut pending) {
                    return None;
                }
            } else if !between_heavy(&mut lay, &chain, short && s4(chain[0]), rng, &mut pending) {
                return None;
            }
        } else if hs || he {
            let mut chain = chain;
            if he {
                chain.reverse();
            }
            let f = flip.entry(chain[0]).or_insert(false);
            let dir = if *f { -1 } else { 1 };
            *f = !*f;
            if !pendant(&mut lay, &chain, dir, rng, &mut pending) {
                return None;
            }
        } else {
            let base = far(&space);
            lay.place(&[chain[0]], &[base]);
            if !monotone(&mut lay, &chain, 1, &alternating(c, &generic(rng, c), chain.len() - 1, false)) {
                return None;
            }
            note_windows(&chain, &mut pending);
        }
    }
    for cyc in &found.cycles {
        let base = far(&space);
        let nodes: Vec<usize> = cyc.nodes.iter().map(|v| v.0).collect();
        let at: Vec<Rational> = (0..nodes.len())
            .map(|_| &base + draw(rng, c, 0, 3 * nodes.len() as i64))
            .collect();
        if !lay.place(&nodes, &at) {
            return None;
        }
    }
    for v in 0..n {
        if lay.pos[v].is_none() {
            let base = far(&space);
            if !lay.place(&[v], &[base]) {
                return None;
            }
        }
    }
    let pos = lay.pos.into_iter().map(Option::unwrap).collect();
    Some((pos, pending))
}

/// Lengths from the free end: `c, a, c, a, ...` (or starting with `a` when
/// `shifted`), returned in order from the anchor outwards.
fn alternating(c: &Rational, a: &Rational, m: usize, shifted: bool) -> Vec<Rational> {
    (0..m)
        .map(|j| {
            let from_free = m - 1 - j;
            if (from_free % 2 == 0) != shifted {
                c.clone()
            } else {
                a.clone()
            }
        })
        .collect()
}

/// Places `chain[1..]` walking from `chain[0]` in direction `dir`.
fn monotone(lay: &mut Layout, chain: &[usize], dir: i64, lens: &[Rational]) -> bool {
    let mut x = lay.at(chain[0]);
    let mut at = Vec::with_capacity(lens.len());
    for l in lens {
        x = &x + l * rational::int(dir);
        at.push(x.clone());
    }
    lay.place(&chain[1..], &at)
}

fn note_windows(chain: &[usize], pending: &mut Vec<Pair>) {
    for i in (0..chain.len()).step_by(3).take_while(|&i| i + 3 < chain.len()) {
        pending.push((PointId(chain[i]), PointId(chain[i + 3])));
    }
}

/// Chain from the heavy `chain[0]` to a degree-1 end.
fn pendant(
    lay: &mut Layout,
    chain: &[usize],
    dir: i64,
    rng: &mut ChaCha8Rng,
    pending: &mut Vec<Pair>,
) -> bool {
    let m = chain.len() - 1;
    let c = lay.c.clone();
    if m == 1 {
        for d in [dir, -dir] {
            let l = generic(rng, &c);
            if monotone(lay, chain, d, &[l]) {
                return true;
            }
        }
        return false;
    }
    let a = generic(rng, &c);
    for shifted in [false, true] {
        for d in [dir, -dir] {
            if monotone(lay, chain, d, &alternating(&c, &a, m, shifted)) {
                note_windows(chain, pending);
                return true;
            }
        }
    }
    let lens: Vec<Rational> = (0..m).map(|_| generic(rng, &c)).collect();
    monotone(lay, chain, dir, &lens)
}

/// Chain between two heavy nodes. The first `3·floor(m/3)` edges form zigzag
/// blocks `a, b, a`; leftover edges are generic and the final edge reaches the
/// far anchor. With `s4` the chain has one interior node joined to a degree-3
/// anchor with two pendant chains, and that edge gets length `c`.
fn between_heavy(
    lay: &mut Layout,
    chain: &[usize],
    s4: bool,
    rng: &mut ChaCha8Rng,
    pending: &mut Vec<Pair>,
) -> bool {
    let m = chain.len() - 1;
    if m == 1 {
        return true;
    }
    let c = lay.c.clone();
    let u = lay.at(chain[0]);
    let v = lay.at(chain[m]);
    if s4 {
        for d in [1, -1] {
            let x = &u + &c * rational::int(d);
            if x != v && lay.place(&[chain[1]], &[x]) {
                return true;
            }
        }
    }
    for _ in 0..4 {
        if let Some(at) = zigzag(&u, &v, m, &c, rng) {
            if lay.place(&chain[1..m], &at) {
                note_windows(chain, pending);
                return true;
            }
        }
    }
    // fallback: generic walk, last edge absorbing
    for _ in 0..4 {
        let mut x = u.clone();
        let mut at = Vec::new();
        for _ in 1..m {
            let step = generic(rng, &c);
            x = if rng.gen() { &x + step } else { &x - step };
            at.push(x.clone());
        }
        if !at.contains(&v) && lay.place(&chain[1..m], &at) {
            return true;
        }
    }
    false
}

/// Interior positions for the zigzag pattern, or `None` on a degenerate draw.
fn zigzag(u: &Rational, v: &Rational, m: usize, c: &Rational, rng: &mut ChaCha8Rng) -> Option<Vec<Rational>> {
    let blocks = m / 3;
    let rest = m % 3;
    let mut w = u.clone();
    let mut sigma = rational::int(1);
    let mut at = Vec::with_capacity(m - 1);
    for bi in 0..blocks {
        let a = generic(rng, c);
        if rest == 0 && bi + 1 == blocks {
            let gap = v - &w;
            if gap.is_zero() {
                return None;
            }
            let s = sign_of(&gap);
            at.push(&w - &s * &a);
            at.push(v - &s * &a);
            return Some(at);
        }
        let b = generic(rng, c);
        at.push(&w - &sigma * &a);
        at.push(&w + &sigma * (&b - &a));
        w = &w + &sigma * &b;
        at.push(w.clone());
        sigma = -sigma;
    }
    for _ in 1..rest {
        let step = generic(rng, c);
        w = &w + &sigma * step;
        at.push(w.clone());
    }
    if at.contains(v) {
        return None;
    }
    Some(at)
}

struct Exploit {
    window: Vec<PointId>,
    x: Vec<Rational>,
    y: Vec<Rational>,
}

/// Windows of 2..=7 consecutive edges along degree-2 chains of `g2`, shortest
/// first. Endpoints must be different points.
fn windows(g2: &Ppg) -> Vec<Vec<usize>> {
    let found = extract_degree2_paths(g2, Round::Second);
    let mut seqs: Vec<(Vec<usize>, bool)> = found
        .paths
        .iter()
        .map(|p| (p.chain().iter().map(|v| v.0).collect(), false))
        .collect();
    for cyc in &found.cycles {
        seqs.push((cyc.nodes.iter().map(|v| v.0).collect(), true));
    }
    let mut out = Vec::new();
    for w in 2..=MAX_WINDOW {
        for (seq, cyclic) in &seqs {
            if *cyclic {
                let m = seq.len();
                if w >= m {
                    continue;
                }
                for s in 0..m {
                    out.push((0..=w).map(|i| seq[(s + i) % m]).collect());
                }
            } else {
                if seq.len() <= w {
                    continue;
                }
                for s in 0..seq.len() - w {
                    let win = &seq[s..=s + w];
                    if win[0] != win[w] {
                        out.push(win.to_vec());
                    }
                }
            }
        }
    }
    out
}

fn find_exploit(g2: &Ppg, p1: &[Rational], c: &Rational, rng: &mut ChaCha8Rng) -> Option<Exploit> {
    windows(g2)
        .into_iter()
        .find_map(|win| try_window(g2, p1, &win, c, rng))
}

/// Two sign patterns over the window's edges that close between its fixed
/// endpoints, with up to two round-2 lengths solved for.
fn try_window(
    g2: &Ppg,
    p1: &[Rational],
    win: &[usize],
    c: &Rational,
    rng: &mut ChaCha8Rng,
) -> Option<Exploit> {
    let w = win.len() - 1;
    let mut known: Vec<Option<Rational>> = Vec::with_capacity(w);
    let mut unknown = Vec::new();
    for i in 0..w {
        let e = g2.edge(PointId(win[i]), PointId(win[i + 1]))?;
        if e.round == Round::Second && unknown.len() < 2 {
            unknown.push(i);
            known.push(None);
        } else {
            known.push(Some(rational::dist(&p1[win[i]], &p1[win[i + 1]])));
        }
    }
    let d = &p1[win[w]] - &p1[win[0]];
    let interior: BTreeSet<usize> = win[1..w].iter().copied().collect();
    let others: BTreeSet<&Rational> = (0..p1.len())
        .filter(|v| !interior.contains(v))
        .map(|v| &p1[v])
        .collect();

    let sign = |mask: u32, i: usize| if mask >> i & 1 == 1 { -1i64 } else { 1 };
    let residual = |mask: u32| {
        let mut k = d.clone();
        for (i, l) in known.iter().enumerate() {
            if let Some(l) = l {
                k -= l * rational::int(sign(mask, i));
            }
        }
        k
    };
    let total = 1u32 << w;
    let res: Vec<Rational> = (0..total).map(residual).collect();

    for s in 0..total {
        for t in s + 1..total {
            let cands = solve_unknowns(&unknown, s, t, &res[s as usize], &res[t as usize], &sign, c, rng);
            for z in cands {
                let mut lens: Vec<Rational> = Vec::with_capacity(w);
                let mut zi = z.iter();
                for l in &known {
                    lens.push(match l {
                        Some(l) => l.clone(),
                        None => zi.next().unwrap().clone(),
                    });
                }
                let walk = |mask: u32| -> Option<Vec<Rational>> {
                    let mut x = p1[win[0]].clone();
                    let mut at = Vec::with_capacity(w - 1);
                    for (i, l) in lens.iter().enumerate() {
                        x = &x + l * rational::int(sign(mask, i));
                        if i + 1 < w {
                            at.push(x.clone());
                        }
                    }
                    let distinct = at.iter().collect::<BTreeSet<_>>().len() == at.len();
                    let clear = at.iter().all(|y| !others.contains(y));
                    (x == p1[win[w]] && distinct && clear).then_some(at)
                };
                let (Some(xs), Some(ys)) = (walk(s), walk(t)) else {
                    continue;
                };
                if xs == ys {
                    continue;
                }
                let mut x = p1.to_vec();
                let mut y = p1.to_vec();
                for (j, &v) in win[1..w].iter().enumerate() {
                    x[v] = xs[j].clone();
                    y[v] = ys[j].clone();
                }
                return Some(Exploit {
                    window: win.iter().map(|&v| PointId(v)).collect(),
                    x,
                    y,
                });
            }
        }
    }
    None
}

/// Positive values for the unknown lengths making both patterns close:
/// `sum_i s_i l_i = d` and `sum_i t_i l_i = d`.
#[allow(clippy::too_many_arguments)]
fn solve_unknowns(
    unknown: &[usize],
    s: u32,
    t: u32,
    ks: &Rational,
    kt: &Rational,
    sign: &dyn Fn(u32, usize) -> i64,
    c: &Rational,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<Rational>> {
    let pos = |z: &Rational| z.is_positive();
    match unknown {
        [] => {
            if ks.is_zero() && kt.is_zero() {
                vec![vec![]]
            } else {
                vec![]
            }
        }
        [j] => {
            let (sj, tj) = (sign(s, *j), sign(t, *j));
            let ok = if sj == tj { ks == kt } else { *ks == -kt };
            let z = ks * rational::int(sj);
            if ok && pos(&z) {
                vec![vec![z]]
            } else {
                vec![]
            }
        }
        [j1, j2] => {
            let (a, b) = (rational::int(sign(s, *j1)), rational::int(sign(s, *j2)));
            let (e, f) = (rational::int(sign(t, *j1)), rational::int(sign(t, *j2)));
            let det = &a * &f - &b * &e;
            if !det.is_zero() {
                let z1 = (ks * &f - kt * &b) / &det;
                let z2 = (&a * kt - &e * ks) / &det;
                return if pos(&z1) && pos(&z2) { vec![vec![z1, z2]] } else { vec![] };
            }
            // rows agree up to sign: one free parameter
            let ok = if a == e { ks == kt } else { *ks == -kt };
            if !ok {
                return vec![];
            }
            let half = ks.abs() / rational::int(2);
            let mut z1s = vec![generic(rng, c), &half + draw(rng, c, 0, 1)];
            z1s.push(ks.abs() + generic(rng, c));
            z1s.into_iter()
                .filter_map(|z1| {
                    let z2 = &b * (ks - &a * &z1);
                    (pos(&z1) && pos(&z2)).then(|| vec![z1, z2])
                })
                .collect()
        }
        _ => unreachable!("at most two unknowns are solved for"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub defeated: bool,
    pub witnesses: Vec<Placement>,
}

/// Whether the answers leave `g2` with two or more placements. A disconnected
/// graph is always ambiguous; its witnesses slide one component.
pub fn adversary_verdict(g2: &Ppg, transcript: &Transcript) -> Result<Verdict> {
    for round in &transcript.rounds {
        for ans in round {
            match g2.edge(ans.a, ans.b) {
                Some(e) if e.length == ans.len => {}
                _ => {
                    return Err(Error::Protocol(format!(
                        "answer {}-{} is not an edge of the graph",
                        ans.a, ans.b
                    )))
                }
            }
        }
    }
    let cap = default_cap();
    let n = g2.n();
    if n > cap {
        return Err(Error::InstanceTooLarge { n, cap });
    }
    let solver = Solver::default().with_cap(cap).with_limit(2);
    if g2.is_connected() {
        let set = solver.solve(g2, &Pins::new())?;
        return Ok(Verdict {
            defeated: set.len() >= 2,
            witnesses: set.placements,
        });
    }

    let comp = g2.components();
    let count = comp.iter().max().map_or(0, |&m| m + 1);
    let mut parts: Vec<(Vec<PointId>, Vec<Rational>)> = Vec::new();
    for k in 0..count {
        let members: Vec<PointId> = (0..n).filter(|&v| comp[v] == k).map(PointId).collect();
        let sub = g2.induced(&members);
        let set = solver.clone().with_limit(1).solve(&sub, &Pins::new())?;
        let coords = match set.placements.first() {
            Some(p) => p.coords().to_vec(),
            None => {
                return Ok(Verdict {
                    defeated: false,
                    witnesses: Vec::new(),
                })
            }
        };
        parts.push((members, coords));
    }
    let span: Rational = parts
        .iter()
        .map(|(_, xs)| xs.iter().max().cloned().unwrap_or_else(Rational::zero))
        .sum();
    let gap = span + rational::int(1);
    let assemble = |first_gap: &Rational| {
        let mut out = vec![Rational::zero(); n];
        let mut offset = Rational::zero();
        for (i, (members, xs)) in parts.iter().enumerate() {
            for (p, x) in members.iter().zip(xs) {
                out[p.0] = &offset + x;
            }
            let width = xs.iter().max().cloned().unwrap_or_else(Rational::zero);
            offset += width + if i == 0 { first_gap.clone() } else { gap.clone() };
        }
        Placement::literal(out).map(|p| p.canonical())
    };
    let one = assemble(&gap)?;
    let two = assemble(&(&gap * rational::int(2)))?;
    Ok(Verdict {
        defeated: true,
        witnesses: vec![one, two],
    })
}
