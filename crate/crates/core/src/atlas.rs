//! Every connected graph on a few vertices, with realizable lengths, checked
//! for agreement between the placement solver and the layer-drawing search.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Ppg, Round};
use crate::rational::{self, Rational};
use crate::rigidity::check_drawing_equivalence;

pub const MAX_ATLAS_N: usize = 7;

fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            idx[i][j] = k;
            idx[j][i] = k;
            k += 1;
        }
    }
    idx
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Smallest edge bitmask over all relabelings.
fn canonical_mask(edges: &[(usize, usize)], perms: &[Vec<usize>], idx: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| edges.iter().fold(0u64, |m, &(a, b)| m | 1 << idx[p[a]][p[b]]))
        .min()
        .unwrap_or(0)
}

fn unmask(n: usize, mask: u64) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> k & 1 == 1 {
                e.push((i, j));
            }
            k += 1;
        }
    }
    e
}

/// Connected graphs on exactly `n` vertices, one per isomorphism class, each
/// grown from a smaller one by adding a vertex joined to a nonempty subset.
pub fn connected_graphs(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n <= MAX_ATLAS_N, "atlas graphs stop at {MAX_ATLAS_N} vertices");
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for m in 2..=n {
        let perms = permutations(m);
        let idx = pair_index(m);
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        for g in &level {
            for subset in 1u32..(1 << (m - 1)) {
                let mut e = g.clone();
                e.extend((0..m - 1).filter(|v| subset >> v & 1 == 1).map(|v| (v, m - 1)));
                seen.insert(canonical_mask(&e, &perms, &idx));
            }
        }
        level = seen.into_iter().map(|mask| unmask(m, mask)).collect();
    }
    level
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasCase {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(with = "rational::serde_str_vec")]
    pub positions: Vec<Rational>,
    pub rigid: bool,
    pub has_drawing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AtlasReport {
    pub max_n: usize,
    pub samples_per_graph: usize,
    pub seed: u64,
    /// Graph count per vertex count `1..=max_n`.
    pub graphs: Vec<usize>,
    pub cases: usize,
    pub rigid: usize,
    pub inconsistencies: Vec<AtlasCase>,
}

/// Distinct integer positions from a small range, so that coincidental equal
/// lengths (and with them non-rigid instances) are common.
fn sample_positions(n: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let range = 2 * n as i64 + rng.gen_range(0..=2 * n as i64);
    let mut pool: Vec<i64> = (0..=range).collect();
    pool.shuffle(rng);
    pool[..n].iter().map(|&x| rational::int(x)).collect()
}

pub fn run_atlas(max_n: usize, samples: usize, seed: u64) -> Result<AtlasReport> {
    if max_n == 0 || max_n > MAX_ATLAS_N {
        return Err(Error::InvalidConfig(format!(
            "atlas size must be in 1..={MAX_ATLAS_N}, got {max_n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = AtlasReport {
        max_n,
        samples_per_graph: samples,
        seed,
        graphs: Vec::new(),
        cases: 0,
        rigid: 0,
        inconsistencies: Vec::new(),
    };
    for n in 1..=max_n {
        let graphs = connected_graphs(n);
        report.graphs.push(graphs.len());
        for edges in &graphs {
            for _ in 0..samples {
                let positions = sample_positions(n, &mut rng);
                let g = Ppg::with_edges(
                    n,
                    edges
                        .iter()
                        .map(|&(a, b)| (a, b, Round::First, rational::dist(&positions[a], &positions[b]))),
                )?;
                let r = check_drawing_equivalence(&g, MAX_ATLAS_N)?;
                report.cases += 1;
                report.rigid += usize::from(r.rigid);
                if !r.consistent {
                    report.inconsistencies.push(AtlasCase {
                        n,
                        edges: edges.clone(),
                        positions,
                        rigid: r.rigid,
                        has_drawing: r.has_drawing,
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_graph_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn two_points() {
        let r = run_atlas(2, 5, 0).unwrap();
        assert_eq!(r.graphs, vec![1, 1]);
        assert_eq!(r.rigid, r.cases);
        assert!(r.inconsistencies.is_empty());
    }

    #[test]
    fn size_limits() {
        assert!(run_atlas(8, 1, 0).is_err());
        assert!(run_atlas(0, 1, 0).is_err());
    }
}
