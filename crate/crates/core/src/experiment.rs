//! One run of an algorithm against an oracle, as the CLI and the Python
//! bindings drive it.

use serde::{Deserialize, Serialize};

use crate::algorithm::{
    run_plan, run_quadrilateral_baseline, run_triangle_baseline, run_two_round, shape_for_n,
    AlgorithmKind, AlgorithmReport, PlanShape, RoundOnePlan,
};
use crate::error::{Error, Result};
use crate::model::Ppg;
use crate::oracle::{adversary_verdict, AdversaryOracle, DistanceOracle, HonestOracle, Transcript, Verdict};
use crate::rigidity::{default_cap, Pins, Solver};

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    #[default]
    Honest,
    Adversary,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmKind,
    /// Three-path parameter; takes precedence over `n` for that algorithm.
    pub b: Option<usize>,
    pub n: Option<usize>,
    #[serde(default)]
    pub oracle: OracleMode,
    #[serde(default)]
    pub seed: u64,
    /// Also brute-force the final graph when it is small enough.
    #[serde(default)]
    pub verify: bool,
}

enum Shape {
    Full(usize),
    Plan(PlanShape, usize),
    Baseline(usize),
}

impl ExperimentConfig {
    pub fn new(algorithm: AlgorithmKind) -> ExperimentConfig {
        ExperimentConfig {
            algorithm,
            b: None,
            n: None,
            oracle: OracleMode::Honest,
            seed: 0,
            verify: false,
        }
    }

    fn shape(&self) -> Result<Shape> {
        match self.algorithm {
            AlgorithmKind::ThreePath => match (self.b, self.n) {
                (Some(0), _) => Err(Error::InvalidConfig("b must be at least 1".into())),
                (Some(b), _) => Ok(Shape::Full(b)),
                (None, Some(n)) => {
                    let (shape, b, padding) = shape_for_n(n)?;
                    Ok(match b {
                        Some(b) if padding == 0 => Shape::Full(b),
                        _ => Shape::Plan(shape, padding),
                    })
                }
                (None, None) => Err(Error::InvalidConfig("three-path needs --b or --n".into())),
            },
            AlgorithmKind::Triangle | AlgorithmKind::Quad => match (self.n, self.b) {
                (Some(n), _) => Ok(Shape::Baseline(n)),
                (None, Some(_)) => Err(Error::InvalidConfig("baselines take --n, not --b".into())),
                (None, None) => Err(Error::InvalidConfig("baselines need --n".into())),
            },
        }
    }

    /// Number of points the run will use.
    pub fn point_count(&self) -> Result<usize> {
        Ok(match self.shape()? {
            Shape::Full(b) => PlanShape::full(b).point_count(),
            Shape::Plan(shape, padding) => shape.point_count() + padding,
            Shape::Baseline(n) => n,
        })
    }

    pub fn run(&self) -> Result<ExperimentOutcome> {
        let n = self.point_count()?;
        let mut oracle: Box<dyn DistanceOracle> = match self.oracle {
            OracleMode::Honest => Box::new(HonestOracle::random(n, self.seed)),
            OracleMode::Adversary => Box::new(AdversaryOracle::new(n, self.seed)),
        };
        let o = oracle.as_mut();
        let mut report = match self.shape()? {
            Shape::Full(b) => run_two_round(o, b)?,
            Shape::Plan(shape, padding) => run_plan(o, RoundOnePlan::new(shape, padding))?,
            Shape::Baseline(n) => match self.algorithm {
                AlgorithmKind::Triangle => run_triangle_baseline(o, n)?,
                _ => run_quadrilateral_baseline(o, n)?,
            },
        };
        let transcript = oracle.transcript().clone();
        let graph = transcript.graph()?;
        let cap = default_cap();

        let brute_force_unique = if self.verify && n <= cap {
            let set = Solver::default().with_cap(cap).with_limit(2).solve(&graph, &Pins::new())?;
            Some(set.len() == 1 && set.placements[0] == report.placement)
        } else {
            None
        };
        let verdict = match self.oracle {
            OracleMode::Adversary if n <= cap => Some(adversary_verdict(&graph, &transcript)?),
            _ => None,
        };
        report.verified &= brute_force_unique != Some(false)
            && !verdict.as_ref().is_some_and(|v| v.defeated);
        Ok(ExperimentOutcome {
            report,
            brute_force_unique,
            verdict,
            transcript,
            graph,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentOutcome {
    /// Its `verified` flag also folds in the brute-force check and the verdict.
    #[serde(flatten)]
    pub report: AlgorithmReport,
    /// Whether brute force agrees the answers pin down exactly the reported placement.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force_unique: Option<bool>,
    /// Against the adversary, on instances small enough to brute-force.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip)]
    pub transcript: Transcript,
    #[serde(skip)]
    pub graph: Ppg,
}

impl ExperimentOutcome {
    /// Own checks hold, brute force (if asked) agrees, and the adversary (if
    /// judged) found no second placement.
    pub fn passed(&self) -> bool {
        self.report.verified
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baseline_needs_n() {
        let mut c = ExperimentConfig::new(AlgorithmKind::Triangle);
        assert!(matches!(c.run(), Err(Error::InvalidConfig(_))));
        c.n = Some(6);
        c.verify = true;
        let out = c.run().unwrap();
        assert_eq!(out.report.total, 9);
        assert_eq!(out.brute_force_unique, Some(true));
        assert!(out.passed());
    }

    #[test]
    fn reduced_three_path_against_the_adversary() {
        let mut c = ExperimentConfig::new(AlgorithmKind::ThreePath);
        c.n = Some(23);
        c.oracle = OracleMode::Adversary;
        c.seed = 4;
        c.verify = true;
        let out = c.run().unwrap();
        assert_eq!(out.report.padding, 1);
        assert_eq!(out.brute_force_unique, Some(true));
        assert!(!out.verdict.unwrap().defeated);
    }

    #[test]
    fn quad_survives_the_adversary() {
        let mut c = ExperimentConfig::new(AlgorithmKind::Quad);
        c.n = Some(9);
        c.oracle = OracleMode::Adversary;
        let out = c.run().unwrap();
        assert!(out.passed(), "{:?}", out.verdict);
    }
}
