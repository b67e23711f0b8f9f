//! Exit gate. Prints one PASS/FAIL line per criterion and exits nonzero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ppg::algorithm::{run_quadrilateral_baseline, run_triangle_baseline, run_two_round};
use ppg::atlas::run_atlas;
use ppg::conditions::{check_three_path, serial, seven_cycle_conditions, EdgeName, ThreePathLengths};
use ppg::lowerbound::{attack_table, check_degree2_paths, heavy_group_density, type_a_density};
use ppg::oracle::{adversary_verdict, AdversaryOracle, DistanceOracle, HiddenInstance, HonestOracle, Pair};
use ppg::rational::{int, ratio};
use ppg::rigidity::{Pins, Solver};
use ppg::{PointId, Ppg, Rational, Round};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Exactly one placement, equal to `expected` (canonical form).
fn brute_force_unique(g: &Ppg, expected: &ppg::Placement) -> bool {
    let set = Solver::default()
        .with_cap(g.n())
        .with_limit(2)
        .solve(g, &Pins::new())
        .expect("solvable instance");
    set.len() == 1 && set.placements[0] == expected.canonical()
}

fn query_counts() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for b in [1usize, 2, 3, 5, 10] {
        let n = 245 * b + 4419;
        let t = Instant::now();
        let mut o = HonestOracle::random(n, b as u64);
        let r = run_two_round(&mut o, b).expect("run completes");
        let took = t.elapsed();
        let ok = r.n == n
            && r.round1 == 210 * b + 4428
            && r.round2 == 105 * b + 2187
            && r.total == 315 * b + 6615
            && r.round1 + r.round2 == r.total
            && 7 * r.total == 9 * n + 6534
            && o.transcript().rounds.len() == 2
            && r.verified
            && took < Duration::from_secs(30);
        pass &= ok;
        lines.push(format!("b={b}: {}+{}={} on n={n} in {:.1}s", r.round1, r.round2, r.total, took.as_secs_f64()));
    }
    outcome(pass, lines.join("; "))
}

fn placement_recovery() -> Outcome {
    let n = 245 + 4419;
    let mut bad = Vec::new();
    let mut slowest = Duration::ZERO;
    for seed in 0..100u64 {
        let t = Instant::now();
        let mut o = HonestOracle::random(n, seed);
        let r = run_two_round(&mut o, 1).expect("run completes");
        slowest = slowest.max(t.elapsed());
        let hidden = HiddenInstance::random(n, seed).canonical();
        if r.placement != hidden || r.matches_hidden != Some(true) {
            bad.push(seed);
        }
    }
    outcome(
        bad.is_empty() && slowest < Duration::from_secs(60),
        format!("100 seeds at b=1, mismatches {bad:?}, slowest seed {:.1}s", slowest.as_secs_f64()),
    )
}

/// Component points in order `p1 p2 p3 q1 q2 q3 r1 r2 r3 s`.
fn component_graph(x: &[Rational; 10]) -> Ppg {
    let mut g = Ppg::new(10);
    for i in 0..3 {
        for (a, b) in [(i, 3 + i), (3 + i, 6 + i), (6 + i, 9)] {
            g.add_edge(a, b, Round::First, ppg::rational::dist(&x[a], &x[b])).unwrap();
        }
    }
    g
}

fn serial_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut passing, mut rejected, mut failures) = (0, 0, Vec::new());
    let t = Instant::now();
    while passing < 500 {
        let scale = 10i64.pow(rng.gen_range(3..=9));
        let raw: BTreeSet<i64> = (0..10).map(|_| rng.gen_range(-scale..=scale)).collect();
        if raw.len() < 10 {
            continue;
        }
        let mut v: Vec<i64> = raw.into_iter().collect();
        // shuffle so every role sees every order
        for i in (1..10).rev() {
            v.swap(i, rng.gen_range(0..=i));
        }
        let x: [Rational; 10] = std::array::from_fn(|i| int(v[i]));
        let lens = ThreePathLengths::from_positions(&x).unwrap();
        if !check_three_path(&lens).unwrap().is_empty() {
            rejected += 1;
            continue;
        }
        passing += 1;
        let pins: Pins = (0..3).map(|i| (PointId(i), x[i].clone())).collect();
        let set = Solver::default()
            .with_cap(10)
            .solve(&component_graph(&x), &pins)
            .unwrap();
        if set.len() != 1 || set.placements[0].coords() != x.as_slice() {
            failures.push(v.clone());
        }
    }
    let took = t.elapsed();
    outcome(
        failures.is_empty() && took < Duration::from_secs(120),
        format!(
            "{passing} samples passing the lists ({rejected} rejected), {} not rigid, {:.1}s",
            failures.len(),
            took.as_secs_f64()
        ),
    )
}

fn condition_counts() -> Outcome {
    let counts: Vec<usize> = (4..=6).map(|k| serial(k).expanded_count()).collect();
    let groups = seven_cycle_conditions();
    let total: usize = groups.iter().map(|g| g.conditions.len()).sum();
    let with_qr = groups
        .iter()
        .flat_map(|g| &g.conditions)
        .filter(|c| c.mentions(EdgeName::QR(1)) || c.mentions(EdgeName::QR(2)))
        .count();
    outcome(
        counts == [20, 45, 61] && total == 42 && with_qr == 20,
        format!("serials 4/5/6 expand to {counts:?}; seven-cycle list has {total}, {with_qr} with q1r1 or q2r2"),
    )
}

fn atlas() -> Outcome {
    let t = Instant::now();
    let r = run_atlas(5, 50, 7).unwrap();
    let took = t.elapsed();
    outcome(
        r.inconsistencies.is_empty()
            && r.graphs == [1, 1, 2, 6, 21]
            && r.cases == 31 * 50
            && took < Duration::from_secs(600),
        format!(
            "{} graphs x 50 samples, {} rigid, {} not, {} inconsistent, {:.1}s",
            r.graphs.iter().sum::<usize>(),
            r.rigid,
            r.cases - r.rigid,
            r.inconsistencies.len(),
            took.as_secs_f64()
        ),
    )
}

/// A small body with a chain of at least four degree-2 points hanging off it:
/// between two body points, as a loop on one, or pendant. Rounds are random.
fn long_path_graph(rng: &mut ChaCha8Rng) -> (usize, Vec<(usize, usize, Round)>) {
    let h = rng.gen_range(3..=6);
    let mut pairs: Vec<(usize, usize)> = (1..h).map(|v| (rng.gen_range(0..v), v)).collect();
    for a in 0..h {
        for b in a + 1..h {
            if !pairs.contains(&(a, b)) && rng.gen_bool(0.5) {
                pairs.push((a, b));
            }
        }
    }
    let k = rng.gen_range(4..=8);
    let a0 = rng.gen_range(0..h);
    let chain: Vec<usize> = (h..h + k).collect();
    pairs.push((a0, chain[0]));
    pairs.extend(chain.windows(2).map(|w| (w[0], w[1])));
    let mut n = h + k;
    match rng.gen_range(0..3) {
        0 => pairs.push((chain[k - 1], (a0 + rng.gen_range(1..h)) % h)),
        1 => pairs.push((chain[k - 1], a0)),
        _ => {
            // pendant: one more point so the chain keeps k degree-2 points
            pairs.push((chain[k - 1], n));
            n += 1;
        }
    }
    for _ in 0..rng.gen_range(0..=(24 - n).min(3)) {
        pairs.push((rng.gen_range(0..h), n));
        n += 1;
    }
    let edges = pairs
        .into_iter()
        .map(|(a, b)| (a, b, if rng.gen_bool(0.5) { Round::First } else { Round::Second }))
        .collect();
    (n, edges)
}

fn adversary_attacks() -> Outcome {
    let mut attacks_ok = 0;
    let table = attack_table();
    for a in &table {
        let g = a.cycle();
        let set = Solver::default().with_cap(6).solve(&g, &Pins::new()).unwrap();
        let distinct: BTreeSet<_> = set.placements.iter().map(|p| p.canonical().coords().to_vec()).collect();
        attacks_ok += usize::from(set.len() == 2 && distinct.len() == 2 && set.placements.iter().all(|p| p.satisfies(&g)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut played, mut survived) = (0, Vec::new());
    while played < 200 {
        let (n, edges) = long_path_graph(&mut rng);
        let mut probe = Ppg::new(n);
        for &(a, b, r) in &edges {
            probe.add_edge(a, b, r, int(1)).unwrap();
        }
        if check_degree2_paths(&probe).max_k < 4 {
            continue;
        }
        played += 1;
        let batch = |r: Round| -> Vec<Pair> {
            edges
                .iter()
                .filter(|e| e.2 == r)
                .map(|&(a, b, _)| (PointId(a), PointId(b)))
                .collect()
        };
        let mut adv = AdversaryOracle::new(n, played as u64);
        adv.answer_round(&batch(Round::First)).unwrap();
        adv.answer_round(&batch(Round::Second)).unwrap();
        let g2 = adv.transcript().graph().unwrap();
        let v = adversary_verdict(&g2, adv.transcript()).unwrap();
        if !v.defeated {
            survived.push(edges.clone());
        }
    }
    if let Some(e) = survived.first() {
        eprintln!("first surviving graph: {e:?}");
    }
    outcome(
        attacks_ok == 5 && table.len() == 5 && survived.is_empty(),
        format!(
            "{attacks_ok}/5 recipes give exactly 2 placements; {}/{played} graphs with a k>=4 path defeated (n<=24)",
            played - survived.len()
        ),
    )
}

fn valence_balance() -> Outcome {
    let mut o = HonestOracle::random(245 + 4419, 77);
    let r = run_two_round(&mut o, 1).unwrap();
    let finals: BTreeSet<usize> = r.final_valences.iter().copied().collect();
    outcome(
        r.max_spread <= 2 && finals.iter().all(|v| (3..=5).contains(v)),
        format!("max spread {}, final valences {finals:?}", r.max_spread),
    )
}

fn baselines() -> Outcome {
    let mut bad = Vec::new();
    for n in 3..=50 {
        let mut o = HonestOracle::random(n, n as u64);
        let r = run_triangle_baseline(&mut o, n).unwrap();
        let g = o.transcript().graph().unwrap();
        if r.total != 2 * n - 3 || !brute_force_unique(&g, &o.hidden().unwrap().canonical()) {
            bad.push(format!("triangle n={n}"));
        }
    }
    let mut spread = 0i64;
    for n in 4..=20 {
        for seed in 0..3 {
            let mut o = HonestOracle::random(n, 100 * n as u64 + seed);
            let r = run_quadrilateral_baseline(&mut o, n).unwrap();
            let g = o.transcript().graph().unwrap();
            // the two hub edges of each four-cycle p0 u v p1 differ
            let four_ok = g
                .edges()
                .iter()
                .filter(|e| e.round == Round::Second && e.a.0 > 1 && e.b.0 > 1)
                .all(|e| {
                    let hub_len = |p: PointId| {
                        [0, 1]
                            .iter()
                            .find_map(|&h| g.edge(PointId(h), p).map(|x| x.length.clone()))
                            .unwrap()
                    };
                    hub_len(e.a) != hub_len(e.b)
                });
            let off = (2 * r.total as i64 - 3 * n as i64).abs();
            spread = spread.max(off);
            if off > 2
                || !four_ok
                || !r.four_cycle_conditions_ok
                || !brute_force_unique(&g, &o.hidden().unwrap().canonical())
            {
                bad.push(format!("quad n={n} seed={seed}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("triangle 2n-3 and rigid for n=3..50; quad within {} of 3n/2 and rigid for n=4..20; failures {bad:?}", spread as f64 / 2.0),
    )
}

fn density_values() -> Outcome {
    let got: Vec<Rational> = (2..=4).map(type_a_density).collect();
    let heavy_ok = (1..=6).all(|m| heavy_group_density(m) >= ratio(9, 8));
    // one more point per group pushes the heavy group below the bound
    let beyond = heavy_group_density(7) < ratio(9, 8);
    outcome(
        got == [ratio(5, 4), ratio(7, 6), ratio(9, 8)] && heavy_ok && beyond,
        format!(
            "type-A k=2,3,4 -> {}; heavy groups >= 9/8 for m<=6",
            got.iter().map(ppg::rational::format).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("query counts", query_counts),
        ("placement recovery", placement_recovery),
        ("serial list soundness", serial_soundness),
        ("condition counts", condition_counts),
        ("rigidity atlas", atlas),
        ("adversary attacks", adversary_attacks),
        ("valence balance", valence_balance),
        ("baselines", baselines),
        ("density values", density_values),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = panic::catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| outcome(false, "panicked"));
        failed += usize::from(!o.pass);
        println!(
            "criterion {} {name}: {} ({}) [{:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
