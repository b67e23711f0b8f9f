//! Choosing the triplet and the three leaves of each component, and pairing
//! the leaves left over at the end.

use std::collections::BTreeMap;

use crate::conditions::{serial, EdgeName, ThreePathLengths};
use crate::error::{Error, Result};
use crate::model::{PointId, ValenceState};
use crate::rational::{self, Rational};

/// Lengths `r1s, r2s, r3s` of one link group, as a partial length table.
pub fn link_lengths(rs: &[Rational; 3]) -> ThreePathLengths {
    let map: BTreeMap<EdgeName, Rational> = (0..3)
        .map(|i| (EdgeName::RS(i as u8 + 1), rs[i].clone()))
        .collect();
    ThreePathLengths::new(map).expect("link lengths are positive")
}

/// `p1` is the lowest-valence core point; `p2` the lowest-valence point whose
/// gap to `p1` avoids the first serial list; `p3` the lowest-valence point
/// whose gaps avoid the second and third. Ties go to the lowest index.
pub fn select_triplet(
    valence: &ValenceState,
    core_x: &[Rational],
    rs: &[Rational; 3],
) -> Result<(usize, usize, usize)> {
    let lens = link_lengths(rs);
    let f1 = serial(1).forbidden_values(&lens)?;
    let f2 = serial(2).forbidden_values(&lens)?;
    let f3 = serial(3).forbidden_values(&lens)?;
    let gap = |a: usize, b: usize| rational::dist(&core_x[a], &core_x[b]);

    let p1 = valence
        .pick_min(|_| true)
        .ok_or(Error::NoFeasibleTriplet(0))?;
    let p2 = valence
        .pick_min(|p| p != p1 && !f1.contains(&gap(p1, p)))
        .ok_or(Error::NoFeasibleTriplet(p1))?;
    let p3 = valence
        .pick_min(|p| {
            p != p1 && p != p2 && !f2.contains(&gap(p2, p)) && !f3.contains(&gap(p, p1))
        })
        .ok_or(Error::NoFeasibleTriplet(p1))?;
    Ok((p1, p2, p3))
}

/// The lowest-id unused leaf of `hub` whose length avoids every value of
/// serial `k` (4, 5 or 6) under the lengths known so far.
pub fn select_leaf_edge(
    hub: usize,
    leaves: &[(PointId, Rational)],
    used: &dyn Fn(PointId) -> bool,
    k: u8,
    context: &ThreePathLengths,
) -> Result<(PointId, Rational)> {
    let forbidden = serial(k).forbidden_values(context)?;
    leaves
        .iter()
        .find(|(q, len)| !used(*q) && !forbidden.contains(len))
        .cloned()
        .ok_or(Error::NoFeasibleLeaf(hub))
}

/// A leftover leaf and the core point it hangs from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Leftover {
    pub hub: usize,
    pub leaf: PointId,
    pub len: Rational,
}

fn conflict(a: &Leftover, b: &Leftover) -> bool {
    a.hub == b.hub || a.len == b.len
}

/// Pairs `left[k]` with `right[k]` where the list is split in half; a pair
/// whose leaves share a hub or a length swaps partners with the previous pair,
/// else with the first later pair that works, else an earlier one. An odd
/// leaf out is returned separately.
pub fn match_leftovers(list: &[Leftover]) -> Result<(Vec<(Leftover, Leftover)>, Option<Leftover>)> {
    let m = list.len() / 2;
    let left = &list[..m];
    let mut right: Vec<Leftover> = list[m..2 * m].to_vec();
    let odd = (list.len() % 2 == 1).then(|| list[2 * m].clone());

    for k in 0..m {
        if !conflict(&left[k], &right[k]) {
            continue;
        }
        let fits = |right: &[Leftover], j: usize| {
            !conflict(&left[k], &right[j]) && !conflict(&left[j], &right[k])
        };
        let partner = (k > 0 && fits(&right, k - 1))
            .then(|| k - 1)
            .or_else(|| (k + 1..m).find(|&j| fits(&right, j)))
            .or_else(|| (0..k).rev().find(|&j| fits(&right, j)));
        match partner {
            Some(j) => right.swap(k, j),
            None => {
                return Err(Error::VerificationFailed(format!(
                    "no partner for leftover leaf {}",
                    left[k].leaf
                )))
            }
        }
    }
    let pairs = left.iter().cloned().zip(right).collect();
    Ok((pairs, odd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn generic_rs() -> [Rational; 3] {
        [int(1_000_003), int(2_000_029), int(4_000_037)]
    }

    #[test]
    fn fresh_triplet_is_lowest_ids() {
        let v = ValenceState::new(35);
        let x: Vec<Rational> = (0..35).map(|i| int(i * i + 7 * i)).collect();
        assert_eq!(select_triplet(&v, &x, &generic_rs()).unwrap(), (0, 1, 2));
    }

    #[test]
    fn colliding_gap_is_skipped() {
        let v = ValenceState::new(5);
        // |p0 p1| = r1s
        let rs = generic_rs();
        let x = vec![int(0), rs[0].clone(), int(17), int(53), int(91)];
        assert_eq!(select_triplet(&v, &x, &rs).unwrap().1, 2);
    }

    #[test]
    fn prefers_low_valence() {
        let mut v = ValenceState::new(5);
        v.attach(0);
        v.attach(1);
        let x: Vec<Rational> = [0, 3, 17, 53, 91].iter().map(|&i| int(i)).collect();
        assert_eq!(select_triplet(&v, &x, &generic_rs()).unwrap(), (2, 3, 4));
    }

    #[test]
    fn leaf_with_link_length_is_skipped() {
        let rs = generic_rs();
        let mut ctx = link_lengths(&rs);
        ctx.set(EdgeName::P1P2, int(10));
        ctx.set(EdgeName::P2P3, int(20));
        ctx.set(EdgeName::P1P3, int(30));
        let leaves = vec![(PointId(5), rs[0].clone()), (PointId(6), int(12345))];
        let got = select_leaf_edge(0, &leaves, &|_| false, 4, &ctx).unwrap();
        assert_eq!(got.0, PointId(6));
        let none = select_leaf_edge(0, &leaves[..1], &|_| false, 4, &ctx);
        assert!(matches!(none, Err(Error::NoFeasibleLeaf(0))));
    }

    fn lo(hub: usize, leaf: usize, len: i64) -> Leftover {
        Leftover {
            hub,
            leaf: PointId(leaf),
            len: int(len),
        }
    }

    #[test]
    fn matching_switches_on_equal_lengths() {
        let list = vec![lo(0, 10, 5), lo(0, 11, 6), lo(1, 12, 5), lo(1, 13, 7), lo(2, 14, 9)];
        let (pairs, odd) = match_leftovers(&list).unwrap();
        assert_eq!(pairs.len(), 2);
        assert_eq!(odd.unwrap().leaf, PointId(14));
        for (a, b) in &pairs {
            assert!(!conflict(a, b));
        }
        assert_eq!(pairs[0].1.leaf, PointId(13));
    }
}
