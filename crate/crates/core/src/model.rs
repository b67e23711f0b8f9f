//! Points, query edges, point placement graphs and canonical placements.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Round {
    First,
    Second,
}

impl Round {
    pub fn number(self) -> u8 {
        match self {
            Round::First => 1,
            Round::Second => 2,
        }
    }

    pub fn from_number(r: u8) -> Result<Round> {
        match r {
            1 => Ok(Round::First),
            2 => Ok(Round::Second),
            _ => Err(Error::Parse(format!("round must be 1 or 2, got {r}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryEdge {
    pub a: PointId,
    pub b: PointId,
    pub round: Round,
    pub length: Rational,
}

impl QueryEdge {
    /// Endpoints are stored with `a < b`.
    pub fn new(a: PointId, b: PointId, round: Round, length: Rational) -> Result<QueryEdge> {
        if a == b {
            return Err(Error::InvalidEdge(format!("self loop at {a}")));
        }
        if !length.is_positive() {
            return Err(Error::InvalidEdge(format!(
                "{a}-{b} has non-positive length {}",
                rational::format(&length)
            )));
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Ok(QueryEdge { a, b, round, length })
    }

    pub fn other(&self, p: PointId) -> PointId {
        if p == self.a {
            self.b
        } else {
            self.a
        }
    }
}

/// What a point is used for in the two-round construction.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Core,
    Leaf,
    Link,
}

/// Point placement graph: points `0..n` and the queried distances between them.
#[derive(Clone, Debug, Default)]
pub struct Ppg {
    n: usize,
    edges: Vec<QueryEdge>,
    index: HashMap<(PointId, PointId), usize>,
    roles: BTreeMap<PointId, Role>,
}

impl PartialEq for Ppg {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges && self.roles == other.roles
    }
}

impl Ppg {
    pub fn new(n: usize) -> Ppg {
        Ppg {
            n,
            ..Default::default()
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[QueryEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn add_edge(&mut self, a: usize, b: usize, round: Round, length: Rational) -> Result<()> {
        for p in [a, b] {
            if p >= self.n {
                return Err(Error::UnknownPoint(p));
            }
        }
        let e = QueryEdge::new(PointId(a), PointId(b), round, length)?;
        let key = (e.a, e.b);
        if self.index.contains_key(&key) {
            return Err(Error::InvalidEdge(format!("duplicate edge {}-{}", e.a, e.b)));
        }
        self.index.insert(key, self.edges.len());
        self.edges.push(e);
        Ok(())
    }

    pub fn with_edges<I>(n: usize, edges: I) -> Result<Ppg>
    where
        I: IntoIterator<Item = (usize, usize, Round, Rational)>,
    {
        let mut g = Ppg::new(n);
        for (a, b, r, l) in edges {
            g.add_edge(a, b, r, l)?;
        }
        Ok(g)
    }

    pub fn edge(&self, a: PointId, b: PointId) -> Option<&QueryEdge> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.index.get(&key).map(|&i| &self.edges[i])
    }

    pub fn set_role(&mut self, p: PointId, role: Role) {
        self.roles.insert(p, role);
    }

    pub fn role(&self, p: PointId) -> Option<Role> {
        self.roles.get(&p).copied()
    }

    pub fn roles(&self) -> &BTreeMap<PointId, Role> {
        &self.roles
    }

    /// Neighbour lists as `(neighbour, edge index)`, in edge insertion order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.a.0].push((e.b.0, i));
            adj[e.b.0].push((e.a.0, i));
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for e in &self.edges {
            d[e.a.0] += 1;
            d[e.b.0] += 1;
        }
        d
    }

    /// `G_1` (round-1 edges only) or `G_2` (all edges).
    pub fn round_view(&self, round: Round) -> Ppg {
        let mut g = Ppg::new(self.n);
        g.roles = self.roles.clone();
        for e in &self.edges {
            if round == Round::Second || e.round == Round::First {
                g.index.insert((e.a, e.b), g.edges.len());
                g.edges.push(e.clone());
            }
        }
        g
    }

    /// Component label per point, labels numbered in order of lowest member.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &(w, _) in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Subgraph induced by `points`, renumbered `0..points.len()` in the given order.
    pub fn induced(&self, points: &[PointId]) -> Ppg {
        let pos: HashMap<PointId, usize> =
            points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut g = Ppg::new(points.len());
        for e in &self.edges {
            if let (Some(&a), Some(&b)) = (pos.get(&e.a), pos.get(&e.b)) {
                g.add_edge(a, b, e.round, e.length.clone())
                    .expect("edges of a valid graph stay valid");
            }
        }
        for (p, r) in &self.roles {
            if let Some(&i) = pos.get(p) {
                g.roles.insert(PointId(i), *r);
            }
        }
        g
    }
}

/// Coordinates for points `0..n`, pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Placement {
    #[serde(with = "rational::serde_str_vec")]
    coords: Vec<Rational>,
}

impl Placement {
    /// Keeps the coordinates as given; only distinctness is checked.
    pub fn literal(coords: Vec<Rational>) -> Result<Placement> {
        check_distinct(&coords)?;
        Ok(Placement { coords })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn coord(&self, p: PointId) -> &Rational {
        &self.coords[p.0]
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn canonical(&self) -> Placement {
        Placement {
            coords: canonical_coords(&self.coords),
        }
    }

    pub fn is_canonical(&self) -> bool {
        canonical_coords(&self.coords) == self.coords
    }

    /// Every edge of `g` has exactly its length in this placement.
    pub fn satisfies(&self, g: &Ppg) -> bool {
        g.n() == self.len()
            && g.edges()
                .iter()
                .all(|e| rational::dist(self.coord(e.a), self.coord(e.b)) == e.length)
    }

    pub fn distance(&self, a: PointId, b: PointId) -> Rational {
        rational::dist(self.coord(a), self.coord(b))
    }
}

fn check_distinct(coords: &[Rational]) -> Result<()> {
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by(|&i, &j| coords[i].cmp(&coords[j]).then(i.cmp(&j)));
    for w in order.windows(2) {
        if coords[w[0]] == coords[w[1]] {
            return Err(Error::DuplicateCoordinate(w[0], w[1]));
        }
    }
    Ok(())
}

fn canonical_coords(raw: &[Rational]) -> Vec<Rational> {
    let (Some(lo), Some(hi)) = (raw.iter().min(), raw.iter().max()) else {
        return Vec::new();
    };
    let shifted: Vec<Rational> = raw.iter().map(|x| x - lo).collect();
    let width = hi - lo;
    let mirrored: Vec<Rational> = shifted.iter().map(|x| &width - x).collect();
    if mirrored < shifted {
        mirrored
    } else {
        shifted
    }
}

/// Representative of `raw` modulo translation and reflection: minimum at 0, and
/// the lexicographically smaller of the placement and its mirror image.
pub fn canonicalize(raw: &[Rational]) -> Result<Placement> {
    check_distinct(raw)?;
    Ok(Placement {
        coords: canonical_coords(raw),
    })
}

/// Number of three-path components attached to each core point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValenceState {
    valence: Vec<usize>,
}

impl ValenceState {
    pub fn new(points: usize) -> ValenceState {
        ValenceState {
            valence: vec![0; points],
        }
    }

    pub fn valence(&self, p: usize) -> usize {
        self.valence[p]
    }

    pub fn valences(&self) -> &[usize] {
        &self.valence
    }

    pub fn attach(&mut self, p: usize) {
        self.valence[p] += 1;
    }

    pub fn min(&self) -> usize {
        self.valence.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> usize {
        self.valence.iter().copied().max().unwrap_or(0)
    }

    pub fn spread(&self) -> usize {
        self.max() - self.min()
    }

    /// `S_d`: points of valence `d`, ascending.
    pub fn bucket(&self, d: usize) -> Vec<usize> {
        (0..self.valence.len())
            .filter(|&p| self.valence[p] == d)
            .collect()
    }

    /// Lowest-valence point accepted by `ok`, ties to the lowest index.
    pub fn pick_min<F: Fn(usize) -> bool>(&self, ok: F) -> Option<usize> {
        (0..self.valence.len())
            .filter(|&p| ok(p))
            .min_by_key(|&p| (self.valence[p], p))
    }
}
