//! Rigidity conditions for the three-path component as literal tables.
//!
//! A table row like `"p1q1 ± p1p2 ≠ q2r2"` reads `||p1q1| ± |p1p2|| ≠ |q2r2|`:
//! every `±` is expanded both ways, the outer absolute value is applied, and
//! the condition holds when no value on the left equals a value on the right.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Edges of the three-path component plus the distances between the pinned
/// points `p1, p2, p3`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeName {
    P1P2,
    P2P3,
    P1P3,
    /// `p_i q_i`, `i` in 1..=3
    PQ(u8),
    QR(u8),
    RS(u8),
}

impl EdgeName {
    pub const ALL: [EdgeName; 12] = [
        EdgeName::P1P2,
        EdgeName::P2P3,
        EdgeName::P1P3,
        EdgeName::PQ(1),
        EdgeName::PQ(2),
        EdgeName::PQ(3),
        EdgeName::QR(1),
        EdgeName::QR(2),
        EdgeName::QR(3),
        EdgeName::RS(1),
        EdgeName::RS(2),
        EdgeName::RS(3),
    ];
}

impl fmt::Display for EdgeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeName::P1P2 => write!(f, "p1p2"),
            EdgeName::P2P3 => write!(f, "p2p3"),
            EdgeName::P1P3 => write!(f, "p1p3"),
            EdgeName::PQ(i) => write!(f, "p{i}q{i}"),
            EdgeName::QR(i) => write!(f, "q{i}r{i}"),
            EdgeName::RS(i) => write!(f, "r{i}s"),
        }
    }
}

impl FromStr for EdgeName {
    type Err = Error;

    fn from_str(s: &str) -> Result<EdgeName> {
        let s = s.trim();
        let e = match s {
            "p1p2" | "p2p1" => EdgeName::P1P2,
            "p2p3" | "p3p2" => EdgeName::P2P3,
            "p1p3" | "p3p1" => EdgeName::P1P3,
            _ => {
                let b = s.as_bytes();
                let idx = |c: u8| (b'1'..=b'3').contains(&c).then(|| c - b'0');
                match b {
                    [b'p', i, b'q', j] if i == j => EdgeName::PQ(idx(*i).ok_or_else(|| bad(s))?),
                    [b'q', i, b'r', j] if i == j => EdgeName::QR(idx(*i).ok_or_else(|| bad(s))?),
                    [b'r', i, b's'] | [b's', b'r', i] => {
                        EdgeName::RS(idx(*i).ok_or_else(|| bad(s))?)
                    }
                    _ => return Err(bad(s)),
                }
            }
        };
        Ok(e)
    }
}

fn bad(s: &str) -> Error {
    Error::Parse(format!("unknown component edge {s:?}"))
}

/// `||t0| ± |t1| ± ...|`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthExpr {
    pub terms: Vec<EdgeName>,
}

impl LengthExpr {
    pub fn parse(s: &str) -> Result<LengthExpr> {
        let terms = s
            .split('±')
            .map(str::parse)
            .collect::<Result<Vec<EdgeName>>>()?;
        Ok(LengthExpr { terms })
    }

    pub fn sign_count(&self) -> usize {
        1 << self.terms.len().saturating_sub(1)
    }

    /// All sign choices, absolute value applied, in sign-vector order (not deduplicated).
    pub fn values(&self, lengths: &ThreePathLengths) -> Result<Vec<Rational>> {
        let vals = self
            .terms
            .iter()
            .map(|&e| lengths.get(e).cloned())
            .collect::<Result<Vec<_>>>()?;
        let k = vals.len() - 1;
        Ok((0..1u32 << k)
            .map(|mask| {
                let mut acc = vals[0].clone();
                for (i, v) in vals[1..].iter().enumerate() {
                    if mask >> i & 1 == 0 {
                        acc += v;
                    } else {
                        acc -= v;
                    }
                }
                acc.abs()
            })
            .collect())
    }

    pub fn mentions(&self, e: EdgeName) -> bool {
        self.terms.contains(&e)
    }
}

impl fmt::Display for LengthExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.terms.iter().map(|t| format!("|{t}|")).collect();
        if inner.len() == 1 {
            write!(f, "{}", inner[0])
        } else {
            write!(f, "|{}|", inner.join(" ± "))
        }
    }
}

/// Expanded, deduplicated values of `e`.
pub fn expand(e: &LengthExpr, lengths: &ThreePathLengths) -> Result<BTreeSet<Rational>> {
    Ok(e.values(lengths)?.into_iter().collect())
}

/// `lhs ≠ rhs` after full expansion of both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub lhs: LengthExpr,
    pub rhs: LengthExpr,
}

impl Condition {
    pub fn parse(s: &str) -> Result<Condition> {
        let (l, r) = s
            .split_once('≠')
            .ok_or_else(|| Error::Parse(format!("condition without ≠: {s:?}")))?;
        Ok(Condition {
            lhs: LengthExpr::parse(l)?,
            rhs: LengthExpr::parse(r)?,
        })
    }

    /// Number of value comparisons this condition stands for.
    pub fn comparisons(&self) -> usize {
        self.lhs.sign_count() * self.rhs.sign_count()
    }

    pub fn mentions(&self, e: EdgeName) -> bool {
        self.lhs.mentions(e) || self.rhs.mentions(e)
    }

    /// The first colliding value, if the condition is violated.
    pub fn collision(&self, lengths: &ThreePathLengths) -> Result<Option<Rational>> {
        let left = expand(&self.lhs, lengths)?;
        let right = expand(&self.rhs, lengths)?;
        Ok(left.intersection(&right).next().cloned())
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≠ {}", self.lhs, self.rhs)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "number", rename_all = "snake_case")]
pub enum ConditionSource {
    /// The six final lists for the component, numbered 1..=6.
    Serial(u8),
    /// The six groups of layer drawings of the seven-cycle, numbered 1..=6.
    SevenCycleGroup(u8),
    /// The conditions that stand in for `|p1p2| ≠ |q2r2|`.
    Replacement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionSet {
    pub source: ConditionSource,
    /// For the serial lists: the edge whose length must avoid every listed value.
    pub target: Option<EdgeName>,
    pub conditions: Vec<Condition>,
}

impl ConditionSet {
    fn from_rows(source: ConditionSource, rows: &[&str]) -> ConditionSet {
        ConditionSet {
            source,
            target: None,
            conditions: rows
                .iter()
                .map(|r| Condition::parse(r).expect("condition tables parse"))
                .collect(),
        }
    }

    fn forbidden(source: ConditionSource, target: &str, values: &[&str]) -> ConditionSet {
        let t: EdgeName = target.parse().expect("condition tables parse");
        ConditionSet {
            source,
            target: Some(t),
            conditions: values
                .iter()
                .map(|v| Condition {
                    lhs: LengthExpr { terms: vec![t] },
                    rhs: LengthExpr::parse(v).expect("condition tables parse"),
                })
                .collect(),
        }
    }

    /// Comparisons before deduplication.
    pub fn expanded_count(&self) -> usize {
        self.conditions.iter().map(Condition::comparisons).sum()
    }

    /// Expanded right-hand values the target must avoid (serial lists only).
    pub fn forbidden_values(&self, lengths: &ThreePathLengths) -> Result<BTreeSet<Rational>> {
        let mut out = BTreeSet::new();
        for c in &self.conditions {
            out.extend(c.rhs.values(lengths)?);
        }
        Ok(out)
    }

    pub fn violations(&self, lengths: &ThreePathLengths) -> Result<Vec<Violation>> {
        let mut out = Vec::new();
        for c in &self.conditions {
            if let Some(v) = c.collision(lengths)? {
                out.push(Violation {
                    source: self.source,
                    condition: c.to_string(),
                    value: rational::format(&v),
                });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.source, self.target) {
            (ConditionSource::Serial(k), Some(t)) => {
                let vals: Vec<String> = self.conditions.iter().map(|c| c.rhs.to_string()).collect();
                write!(f, "{k}. |{t}| ∉ {{{}}}", vals.join(", "))
            }
            (src, _) => {
                let head = match src {
                    ConditionSource::SevenCycleGroup(k) => format!("{k}."),
                    _ => "replacement:".to_string(),
                };
                let rows: Vec<String> = self.conditions.iter().map(|c| c.to_string()).collect();
                write!(f, "{head} {}", rows.join(", "))
            }
        }
    }
}

const SERIALS: [(&str, &[&str]); 6] = [
    ("p1p2", &["r1s", "r2s", "r1s ± r2s"]),
    ("p2p3", &["r2s", "r3s", "r2s ± r3s"]),
    ("p3p1", &["r3s", "r1s", "r3s ± r1s"]),
    (
        "p1q1",
        &[
            "r1s",
            "r2s",
            "r1s ± r2s",
            "p1p2 ± r1s",
            "p1p2 ± r2s",
            "p1p3 ± r1s",
            "p1p3 ± r3s",
            "p1p2 ± r1s ± r2s",
            "p1p3 ± r1s ± r3s",
        ],
    ),
    (
        "p2q2",
        &[
            "r1s",
            "r2s",
            "p1q1",
            "r1s ± r2s",
            "p1p2 ± r1s",
            "p1p2 ± r2s",
            "p2p3 ± r2s",
            "p2p3 ± r3s",
            "p1q1 ± r1s",
            "p1q1 ± r2s",
            "p1p2 ± r1s ± r2s",
            "p2p3 ± r2s ± r3s",
            "p1q1 ± r1s ± r2s",
            "p1q1 ± p1p2 ± r1s",
            "p1q1 ± p1p2 ± r2s",
            "p1q1 ± p1p2 ± r1s ± r2s",
        ],
    ),
    (
        "p3q3",
        &[
            "r1s",
            "r2s",
            "r3s",
            "p1q1",
            "p2q2",
            "r2s ± r3s",
            "r3s ± r1s",
            "p1p3 ± r3s",
            "p2p3 ± r3s",
            "p1q1 ± r1s",
            "p1q1 ± r3s",
            "p2q2 ± r2s",
            "p2q2 ± r3s",
            "p1p3 ± r1s ± r3s",
            "p2p3 ± r2s ± r3s",
            "p1q1 ± r1s ± r3s",
            "p2q2 ± r2s ± r3s",
            "p1q1 ± p1p3 ± r3s",
            "p2q2 ± p2p3 ± r3s",
            "p1q1 ± p1p3 ± r1s ± r2s",
            "p2q2 ± p2p3 ± r2s ± r3s",
        ],
    ),
];

const SEVEN_CYCLE_GROUPS: [[&str; 7]; 6] = [
    [
        "p1p2 ≠ q2r2",
        "p1p2 ≠ q1r1",
        "p2q2 ≠ r2s",
        "p1q1 ≠ r1s",
        "q2r2 ≠ r1s",
        "q1r1 ≠ r2s",
        "p1q1 ≠ p2q2",
    ],
    [
        "p1p2 ± p2q2 ≠ r2s",
        "p2q2 ± q2r2 ≠ r1s",
        "p1p2 ± p1q1 ± p2q2 ≠ r1s",
        "p1q1 ≠ r1s ± r2s",
        "p1p2 ≠ q1r1 ± r1s",
        "p1q1 ± q1r1 ≠ p2q2",
        "p1q1 ± p1p2 ≠ q2r2",
    ],
    [
        "p1p2 ± p1q1 ≠ r1s",
        "p1q1 ± q1r1 ≠ r2s",
        "p1p2 ± p1q1 ± p2q2 ≠ r2s",
        "p2q2 ≠ r1s ± r2s",
        "p1p2 ≠ q2r2 ± r2s",
        "p2q2 ± q2r2 ≠ p2q2",
        "p2q2 ± p1p2 ≠ q1r1",
    ],
    [
        "p1p2 ≠ r2s",
        "p1p2 ≠ r1s",
        "p2q2 ≠ r1s",
        "p1q1 ≠ r2s",
        "p1q1 ± p2q2 ± p1p2 ≠ r1s ± r2s",
        "p2q2 ≠ q1r1",
        "p1q1 ≠ q2r2",
    ],
    [
        "p2q2 ≠ p1p2 ± r1s",
        "p1q1 ≠ p1p2 ± r2s",
        "p1q1 ≠ p1p2 ± r1s ± r2s",
        "p2q2 ≠ p1p2 ± r1s ± r2s",
        "p1q1 ≠ q2r2 ± r2s",
        "p2q2 ≠ q1r1 ± r1s",
        "p1p2 ≠ r1s ± r2s",
    ],
    [
        "p1q1 ± q1r1 ≠ p2q2 ± r2s",
        "p2q2 ± q2r2 ≠ p1q1 ± r1s",
        "q1r1 ≠ p2q2 ± r2s",
        "q2r2 ≠ p1q1 ± r1s",
        "p2q2 ≠ p1q1 ± r1s",
        "p1q1 ≠ p2q2 ± r2s",
        "p2q2 ≠ p1q1 ± r1s ± r2s",
    ],
];

const REPLACEMENT: [&str; 4] = [
    "p1p3 ≠ p3q3 ± r3s",
    "p1p3 ≠ r3s",
    "p3q3 ± sr2 ≠ p2q2",
    "p3q3 ± sr2 ± sr3 ≠ p2q2",
];

/// The six final lists: serials 1..=3 constrain the pinned gaps, 4..=6 the
/// edges `p1q1`, `p2q2`, `p3q3`.
pub fn serial_condition_sets() -> Vec<ConditionSet> {
    SERIALS
        .iter()
        .enumerate()
        .map(|(i, (t, vals))| ConditionSet::forbidden(ConditionSource::Serial(i as u8 + 1), t, vals))
        .collect()
}

pub fn serial(k: u8) -> ConditionSet {
    assert!((1..=6).contains(&k), "serials are numbered 1..=6");
    let (t, vals) = SERIALS[k as usize - 1];
    ConditionSet::forbidden(ConditionSource::Serial(k), t, vals)
}

/// The 42 conditions read off the layer drawings of the seven-cycle
/// `p1 q1 r1 s r2 q2 p2`, in six groups of seven.
pub fn seven_cycle_conditions() -> Vec<ConditionSet> {
    SEVEN_CYCLE_GROUPS
        .iter()
        .enumerate()
        .map(|(i, rows)| ConditionSet::from_rows(ConditionSource::SevenCycleGroup(i as u8 + 1), rows))
        .collect()
}

/// Conditions that rule out the layer drawings of the whole component in which
/// the seven-cycle takes the shape forbidden by `|p1p2| ≠ |q2r2|`.
pub fn replacement_conditions() -> ConditionSet {
    ConditionSet::from_rows(ConditionSource::Replacement, &REPLACEMENT)
}

/// The four-cycle `p3 q3 r3 s` with `p3`, `s` fixed is rigid iff its two free sides differ.
pub fn check_four_cycle(pq: &Rational, rs: &Rational) -> bool {
    pq != rs
}

/// Named lengths of a three-path component. The pinned gaps must be collinear:
/// one of them is the sum of the other two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreePathLengths {
    map: BTreeMap<EdgeName, Rational>,
}

impl ThreePathLengths {
    pub fn new(map: BTreeMap<EdgeName, Rational>) -> Result<ThreePathLengths> {
        for (e, v) in &map {
            if !v.is_positive() {
                return Err(Error::InvalidEdge(format!(
                    "{e} has non-positive length {}",
                    rational::format(v)
                )));
            }
        }
        let l = ThreePathLengths { map };
        if let (Ok(a), Ok(b), Ok(c)) = (
            l.get(EdgeName::P1P2),
            l.get(EdgeName::P2P3),
            l.get(EdgeName::P1P3),
        ) {
            if a + b != *c && a + c != *b && b + c != *a {
                return Err(Error::InvalidConfig(
                    "pinned gaps p1p2, p2p3, p1p3 are not collinear".into(),
                ));
            }
        }
        Ok(l)
    }

    /// Lengths read off a placement of `[p1, p2, p3, q1, q2, q3, r1, r2, r3, s]`.
    pub fn from_positions(x: &[Rational; 10]) -> Result<ThreePathLengths> {
        let d = |i: usize, j: usize| rational::dist(&x[i], &x[j]);
        let mut map = BTreeMap::new();
        map.insert(EdgeName::P1P2, d(0, 1));
        map.insert(EdgeName::P2P3, d(1, 2));
        map.insert(EdgeName::P1P3, d(0, 2));
        for i in 0..3 {
            let k = i as u8 + 1;
            map.insert(EdgeName::PQ(k), d(i, 3 + i));
            map.insert(EdgeName::QR(k), d(3 + i, 6 + i));
            map.insert(EdgeName::RS(k), d(6 + i, 9));
        }
        ThreePathLengths::new(map)
    }

    pub fn get(&self, e: EdgeName) -> Result<&Rational> {
        self.map.get(&e).ok_or_else(|| Error::MissingEdge(e.to_string()))
    }

    pub fn set(&mut self, e: EdgeName, v: Rational) {
        self.map.insert(e, v);
    }

    pub fn with(&self, e: EdgeName, v: Rational) -> ThreePathLengths {
        let mut c = self.clone();
        c.set(e, v);
        c
    }

    pub fn map(&self) -> &BTreeMap<EdgeName, Rational> {
        &self.map
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub source: ConditionSource,
    pub condition: String,
    pub value: String,
}

/// Every serial 1..=6 condition, collected.
pub fn check_three_path(lengths: &ThreePathLengths) -> Result<Vec<Violation>> {
    let mut out = Vec::new();
    for set in serial_condition_sets() {
        out.extend(set.violations(lengths)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn lengths(pairs: &[(&str, i64)]) -> ThreePathLengths {
        ThreePathLengths::new(
            pairs
                .iter()
                .map(|(k, v)| (k.parse().unwrap(), int(*v)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn expand_examples() {
        let l = lengths(&[("r1s", 3), ("r2s", 5), ("p1p2", 7)]);
        let e = LengthExpr::parse("r1s ± r2s").unwrap();
        assert_eq!(expand(&e, &l).unwrap(), [int(2), int(8)].into());
        let e = LengthExpr::parse("p1p2 ± r1s ± r2s").unwrap();
        assert_eq!(expand(&e, &l).unwrap(), [int(1), int(5), int(9), int(15)].into());
        let e = LengthExpr::parse("r1s").unwrap();
        assert_eq!(expand(&e, &l).unwrap(), [int(3)].into());
        let e = LengthExpr::parse("p3q3").unwrap();
        assert!(matches!(expand(&e, &l), Err(Error::MissingEdge(_))));
    }

    #[test]
    fn edge_names_round_trip() {
        for e in EdgeName::ALL {
            assert_eq!(e.to_string().parse::<EdgeName>().unwrap(), e);
        }
        assert_eq!("sr2".parse::<EdgeName>().unwrap(), EdgeName::RS(2));
        assert_eq!("p3p1".parse::<EdgeName>().unwrap(), EdgeName::P1P3);
        assert!("p1q2".parse::<EdgeName>().is_err());
        assert!("r4s".parse::<EdgeName>().is_err());
    }

    #[test]
    fn rendering_follows_bar_notation() {
        let c = Condition::parse("p1q1 ± p1p2 ≠ q2r2").unwrap();
        assert_eq!(c.to_string(), "||p1q1| ± |p1p2|| ≠ |q2r2|");
        assert_eq!(
            serial(1).to_string(),
            "1. |p1p2| ∉ {|r1s|, |r2s|, ||r1s| ± |r2s||}"
        );
    }

    #[test]
    fn four_cycle() {
        assert!(check_four_cycle(&int(3), &int(5)));
        assert!(!check_four_cycle(&int(4), &int(4)));
        assert!(!check_four_cycle(
            &crate::rational::ratio(7, 2),
            &crate::rational::ratio(14, 4)
        ));
    }

    #[test]
    fn collinearity_is_enforced() {
        let m: BTreeMap<EdgeName, Rational> = [
            (EdgeName::P1P2, int(2)),
            (EdgeName::P2P3, int(3)),
            (EdgeName::P1P3, int(4)),
        ]
        .into();
        assert!(ThreePathLengths::new(m).is_err());
    }
}
