//! Distance oracles: an honest one over hidden positions and the lower-bound
//! adversary. Each call to [`DistanceOracle::answer_round`] is one round.

mod adversary;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{canonicalize, Placement, PointId, Ppg, Round};
use crate::rational::{self, Rational};

pub use adversary::{adversary_verdict, AdversaryOracle, AdversaryState, Verdict};

pub type Pair = (PointId, PointId);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub a: PointId,
    pub b: PointId,
    #[serde(with = "rational::serde_str")]
    pub len: Rational,
}

/// Every query and its answer, round by round.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub n: usize,
    pub rounds: Vec<Vec<Answer>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<Placement>,
}

impl Transcript {
    pub fn new(n: usize) -> Transcript {
        Transcript {
            n,
            ..Default::default()
        }
    }

    pub fn query_count(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }

    /// The answered edges as a ppg; rounds after the second are tagged round 2.
    pub fn graph(&self) -> Result<Ppg> {
        let mut g = Ppg::new(self.n);
        for (i, round) in self.rounds.iter().enumerate() {
            let r = if i == 0 { Round::First } else { Round::Second };
            for ans in round {
                g.add_edge(ans.a.0, ans.b.0, r, ans.len.clone())?;
            }
        }
        Ok(g)
    }

    fn record(&mut self, batch: &[Pair], lens: &[Rational]) {
        self.rounds.push(
            batch
                .iter()
                .zip(lens)
                .map(|(&(a, b), l)| Answer { a, b, len: l.clone() })
                .collect(),
        );
    }
}

pub trait DistanceOracle {
    fn n(&self) -> usize;

    /// Answers one round of queries, in order.
    fn answer_round(&mut self, batch: &[Pair]) -> Result<Vec<Rational>>;

    fn transcript(&self) -> &Transcript;

    /// The true positions, when the oracle has them.
    fn hidden(&self) -> Option<&HiddenInstance> {
        None
    }
}

pub(crate) fn check_batch(n: usize, batch: &[Pair]) -> Result<()> {
    for &(a, b) in batch {
        for p in [a, b] {
            if p.0 >= n {
                return Err(Error::UnknownPoint(p.0));
            }
        }
        if a == b {
            return Err(Error::InvalidEdge(format!("query {a}-{b} is a self pair")));
        }
    }
    Ok(())
}

/// Pairwise distinct rational positions drawn from a seeded ChaCha8 stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HiddenInstance {
    pub positions: Vec<Rational>,
    pub seed: u64,
}

impl HiddenInstance {
    /// Numerators up to 2^40 in magnitude over denominators 1..=64.
    pub fn random(n: usize, seed: u64) -> HiddenInstance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut positions = Vec::with_capacity(n);
        let mut seen = std::collections::BTreeSet::new();
        while positions.len() < n {
            let num: i64 = rng.gen_range(-(1i64 << 40)..=(1i64 << 40));
            let den: i64 = rng.gen_range(1..=64);
            let x = Rational::new(BigInt::from(num), BigInt::from(den));
            if seen.insert(x.clone()) {
                positions.push(x);
            }
        }
        HiddenInstance { positions, seed }
    }

    pub fn from_positions(positions: Vec<Rational>) -> Result<HiddenInstance> {
        Placement::literal(positions.clone())?;
        Ok(HiddenInstance { positions, seed: 0 })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn canonical(&self) -> Placement {
        canonicalize(&self.positions).expect("hidden positions are distinct")
    }
}

/// `|pos(a) - pos(b)|` for every pair.
pub fn honest_answer(inst: &HiddenInstance, batch: &[Pair]) -> Result<Vec<Rational>> {
    check_batch(inst.n(), batch)?;
    Ok(batch
        .iter()
        .map(|&(a, b)| rational::dist(&inst.positions[a.0], &inst.positions[b.0]))
        .collect())
}

#[derive(Clone, Debug)]
pub struct HonestOracle {
    inst: HiddenInstance,
    transcript: Transcript,
}

impl HonestOracle {
    pub fn new(inst: HiddenInstance) -> HonestOracle {
        let transcript = Transcript::new(inst.n());
        HonestOracle { inst, transcript }
    }

    pub fn random(n: usize, seed: u64) -> HonestOracle {
        HonestOracle::new(HiddenInstance::random(n, seed))
    }
}

impl DistanceOracle for HonestOracle {
    fn n(&self) -> usize {
        self.inst.n()
    }

    fn answer_round(&mut self, batch: &[Pair]) -> Result<Vec<Rational>> {
        let lens = honest_answer(&self.inst, batch)?;
        self.transcript.record(batch, &lens);
        Ok(lens)
    }

    fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    fn hidden(&self) -> Option<&HiddenInstance> {
        Some(&self.inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn pair(a: usize, b: usize) -> Pair {
        (PointId(a), PointId(b))
    }

    #[test]
    fn honest_examples() {
        let inst = HiddenInstance::from_positions(vec![int(0), int(3), int(10)]).unwrap();
        assert_eq!(honest_answer(&inst, &[pair(0, 2)]).unwrap(), vec![int(10)]);
        assert_eq!(honest_answer(&inst, &[pair(2, 0)]).unwrap(), vec![int(10)]);
        assert_eq!(
            honest_answer(&inst, &[pair(0, 1), pair(1, 2)]).unwrap(),
            vec![int(3), int(7)]
        );
        assert!(matches!(
            honest_answer(&inst, &[pair(0, 5)]),
            Err(Error::UnknownPoint(5))
        ));
    }

    #[test]
    fn random_instance_is_reproducible_and_distinct() {
        let a = HiddenInstance::random(200, 9);
        assert_eq!(a, HiddenInstance::random(200, 9));
        assert_ne!(a, HiddenInstance::random(200, 10));
        assert!(Placement::literal(a.positions.clone()).is_ok());
    }

    #[test]
    fn transcript_records_rounds() {
        let mut o = HonestOracle::random(4, 1);
        o.answer_round(&[pair(0, 1), pair(1, 2)]).unwrap();
        o.answer_round(&[pair(2, 3)]).unwrap();
        let t = o.transcript();
        assert_eq!(t.rounds.len(), 2);
        assert_eq!(t.query_count(), 3);
        let g = t.graph().unwrap();
        assert_eq!(g.round_view(Round::First).edge_count(), 2);
        let json = serde_json::to_string(t).unwrap();
        assert_eq!(&serde_json::from_str::<Transcript>(&json).unwrap(), t);
    }
}
