//! File formats: instances, length tables for the condition checker, and
//! query scripts for the oracle runner.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::conditions::{EdgeName, ThreePathLengths};
use crate::error::{Error, Result};
use crate::model::{PointId, Ppg, Round};
use crate::oracle::Pair;
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub a: usize,
    pub b: usize,
    pub round: u8,
    #[serde(with = "rational::serde_str")]
    pub len: Rational,
}

/// `{"n": 3, "edges": [{"a": 0, "b": 1, "round": 1, "len": "5/1"}, ...]}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub edges: Vec<EdgeRecord>,
}

impl From<&Ppg> for InstanceFile {
    fn from(g: &Ppg) -> Self {
        InstanceFile {
            n: g.n(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    a: e.a.0,
                    b: e.b.0,
                    round: e.round.number(),
                    len: e.length.clone(),
                })
                .collect(),
        }
    }
}

impl InstanceFile {
    pub fn to_ppg(&self) -> Result<Ppg> {
        let mut g = Ppg::new(self.n);
        for e in &self.edges {
            g.add_edge(e.a, e.b, Round::from_number(e.round)?, e.len.clone())?;
        }
        Ok(g)
    }
}

pub fn instance_to_json(g: &Ppg) -> String {
    serde_json::to_string_pretty(&InstanceFile::from(g)).expect("instances serialize")
}

pub fn instance_from_json(s: &str) -> Result<Ppg> {
    serde_json::from_str::<InstanceFile>(s)?.to_ppg()
}

pub fn read_instance(path: &Path) -> Result<Ppg> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: &Path, g: &Ppg) -> Result<()> {
    std::fs::write(path, instance_to_json(g) + "\n")?;
    Ok(())
}

/// `{"p1p2": "4099/1", "r1s": "2", ...}`; names like `p3p1` and `sr2` are accepted.
pub fn lengths_from_json(s: &str) -> Result<ThreePathLengths> {
    let raw: BTreeMap<String, String> = serde_json::from_str(s)?;
    let mut map = BTreeMap::new();
    for (k, v) in raw {
        let e: EdgeName = k.parse()?;
        if map.insert(e, rational::parse(&v)?).is_some() {
            return Err(Error::Parse(format!("{e} given twice")));
        }
    }
    ThreePathLengths::new(map)
}

pub fn lengths_to_json(l: &ThreePathLengths) -> String {
    let map: BTreeMap<String, String> = l
        .map()
        .iter()
        .map(|(k, v)| (k.to_string(), rational::format(v)))
        .collect();
    serde_json::to_string_pretty(&map).expect("lengths serialize")
}

/// Query rounds for the oracle runner: `{"n": 4, "rounds": [[[0, 1], [1, 2]], [[2, 3]]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryScript {
    pub n: usize,
    pub rounds: Vec<Vec<(usize, usize)>>,
}

impl QueryScript {
    pub fn batches(&self) -> Vec<Vec<Pair>> {
        self.rounds
            .iter()
            .map(|r| r.iter().map(|&(a, b)| (PointId(a), PointId(b))).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn instance_round_trip() {
        let mut g = Ppg::new(3);
        g.add_edge(0, 1, Round::First, int(5)).unwrap();
        g.add_edge(1, 2, Round::Second, ratio(7, 3)).unwrap();
        let s = instance_to_json(&g);
        assert!(s.contains("\"7/3\""));
        let back = instance_from_json(&s).unwrap();
        assert_eq!(InstanceFile::from(&back), InstanceFile::from(&g));
    }

    #[test]
    fn bad_instances_are_rejected() {
        let bad_round = r#"{"n": 2, "edges": [{"a": 0, "b": 1, "round": 3, "len": "1/1"}]}"#;
        assert!(instance_from_json(bad_round).is_err());
        let zero = r#"{"n": 2, "edges": [{"a": 0, "b": 1, "round": 1, "len": "0/1"}]}"#;
        assert!(instance_from_json(zero).is_err());
        let outside = r#"{"n": 2, "edges": [{"a": 0, "b": 2, "round": 1, "len": "1"}]}"#;
        assert!(matches!(instance_from_json(outside), Err(Error::UnknownPoint(2))));
    }

    #[test]
    fn lengths_accept_reversed_names() {
        let l = lengths_from_json(r#"{"p3p1": "3", "p1p2": "1", "p2p3": "2", "sr2": "9/2"}"#).unwrap();
        assert_eq!(l.get(EdgeName::P1P3).unwrap(), &int(3));
        assert_eq!(l.get(EdgeName::RS(2)).unwrap(), &ratio(9, 2));
        let back = lengths_from_json(&lengths_to_json(&l)).unwrap();
        assert_eq!(back, l);
    }
}
